//! Exterior calculus on ℝⁿ with rational-function coefficients, and descent
//! of basic forms through Hilbert maps.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::actions::{linear_substitution, GroupAction, HilbertMap};
use crate::error::{Error, Result};
use crate::fields::Derivation;
use crate::linalg;
use crate::poly::{
    default_names, differential_index, normal_form, parse_coefficient, split_last_factor, split_summands, Monomial,
    Polynomial, RationalFunction,
};
use crate::space::SpaceDef;
use crate::Rational;

use num_traits::{Signed, Zero};

/// A `k`-form `Σ a_I dx_I` over strictly increasing index tuples `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DifferentialForm {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RationalFunction>,
}

/// Sorts `idx` in place; returns the permutation sign, or `None` if an
/// index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

impl DifferentialForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        DifferentialForm { nvars, degree, terms: BTreeMap::new() }
    }

    /// A 0-form.
    pub fn function(f: RationalFunction) -> Self {
        let mut out = Self::zero(f.nvars(), 0);
        out.add_term(vec![], f);
        out
    }

    /// The 1-form `dxᵢ`.
    pub fn dx(nvars: usize, i: usize) -> Self {
        Self::monomial(RationalFunction::one(nvars), &[i]).expect("single index")
    }

    /// `f dx_{i₁} ∧ … ∧ dx_{i_k}` for an arbitrary index list; repeated
    /// indices give zero.
    pub fn monomial(f: RationalFunction, indices: &[usize]) -> Result<Self> {
        let n = f.nvars();
        if let Some(&i) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch { expected: n, got: i + 1 });
        }
        let mut out = Self::zero(n, indices.len());
        let mut idx = indices.to_vec();
        if let Some(neg) = sort_sign(&mut idx) {
            out.add_term(idx, if neg { -f } else { f });
        }
        Ok(out)
    }

    /// Builds from `(coefficient, indices)` pairs.
    pub fn from_terms(nvars: usize, degree: usize, terms: Vec<(RationalFunction, Vec<usize>)>) -> Result<Self> {
        let mut out = Self::zero(nvars, degree);
        for (f, idx) in terms {
            if idx.len() != degree {
                return Err(Error::Invalid(format!("index tuple {idx:?} does not have length {degree}")));
            }
            if f.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: f.nvars() });
            }
            out = out.add(&Self::monomial(f, &idx)?)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, idx: Vec<usize>, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(g) => &g + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    /// Parses `Σ a_I dx_{i₁}^…^dx_{i_k}` as printed by
    /// [`DifferentialForm::to_string_with`]. `degree` is needed only for the
    /// zero form.
    pub fn parse(s: &str, vars: &[String], degree: Option<usize>) -> Result<Self> {
        let n = vars.len();
        if s.trim() == "0" {
            return Ok(Self::zero(n, degree.unwrap_or(0)));
        }
        let mut out: Option<Self> = None;
        for term in split_summands(s)? {
            let (head, last, at) = split_last_factor(&term.text);
            let diffs: Option<Vec<usize>> = last.split('^').map(|t| differential_index(t.trim(), vars)).collect();
            let (coeff_text, idx, offset) = match diffs {
                Some(idx) => (head, idx, term.column - 1),
                None if last.contains('^') && last.starts_with('d') && !last.contains('(') => {
                    return Err(Error::Parse {
                        column: term.column + at,
                        message: format!("unknown differential in `{last}`"),
                    })
                }
                None => (term.text.clone(), Vec::new(), term.column - 1),
            };
            let c = parse_coefficient(&coeff_text, vars, offset)?;
            let piece = Self::monomial(if term.negative { -c } else { c }, &idx)?;
            out = Some(match out {
                None => piece,
                Some(acc) if acc.degree != piece.degree => {
                    return Err(Error::Parse { column: term.column, message: "terms of different degree".into() })
                }
                Some(acc) => acc.add(&piece)?,
            });
        }
        let out = out.expect("at least one summand");
        if let Some(d) = degree.filter(|&d| d != out.degree) {
            return Err(Error::Invalid(format!("form has degree {}, expected {d}", out.degree)));
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[usize]) -> RationalFunction {
        self.terms.get(idx).cloned().unwrap_or_else(|| RationalFunction::zero(self.nvars))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Invalid("adding forms of different degree".into()));
        }
        let mut out = if self.is_zero() { Self::zero(self.nvars, other.degree) } else { self.clone() };
        if self.is_zero() {
            out.degree = other.degree;
        }
        for (i, f) in &other.terms {
            out.add_term(i.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale_rf(&RationalFunction::constant(self.nvars, Rational::from_integer((-1).into())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a function.
    pub fn scale_rf(&self, f: &RationalFunction) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (i, g) in &self.terms {
            out.add_term(i.clone(), g * f);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                let mut idx: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some(neg) = sort_sign(&mut idx) {
                    let c = f * g;
                    out.add_term(idx, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_d(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (idx, f) in &self.terms {
            for v in 0..self.nvars {
                if idx.contains(&v) {
                    continue;
                }
                let df = f.derivative(v);
                if df.is_zero() {
                    continue;
                }
                let mut full = vec![v];
                full.extend(idx);
                let neg = sort_sign(&mut full).expect("distinct");
                out.add_term(full, if neg { -df } else { df });
            }
        }
        out
    }

    /// Contraction `X ⌟ α` in the first slot.
    pub fn interior(&self, x: &Derivation) -> Result<Self> {
        if x.nvars() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: x.nvars() });
        }
        if self.degree == 0 {
            return Ok(Self::zero(self.nvars, 0));
        }
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for (idx, f) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let a = &x.components()[i];
                if a.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let c = f.mul_poly(a);
                out.add_term(rest, if pos % 2 == 1 { -c } else { c });
            }
        }
        Ok(out)
    }

    pub fn eval_coefficients(&self, x: &[Rational]) -> Result<BTreeMap<Vec<usize>, Rational>> {
        self.terms.iter().map(|(i, f)| Ok((i.clone(), f.eval(x)?))).collect()
    }

    /// Canonical text, e.g. `(1/(4*u)) ds^dt + x dx`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, f) in &self.terms {
            let s = f.to_string_with(names);
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if f.is_polynomial() && f.numerator().num_terms() == 1 => (true, rest.to_string()),
                _ => (false, s),
            };
            let single = f.is_polynomial() && f.numerator().num_terms() == 1;
            let d: Vec<String> = idx.iter().map(|&i| format!("d{}", names[i])).collect();
            let term = match (idx.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => d.join("^"),
                (false, _) if single => format!("{body} {}", d.join("^")),
                (false, _) => format!("({body}) {}", d.join("^")),
            };
            match (out.is_empty(), neg) {
                (true, false) => out.push_str(&term),
                (true, true) => out.push_str(&format!("-{term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
                (false, true) => out.push_str(&format!(" - {term}")),
            }
        }
        out
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

/// A polynomial map `ℝ^source → ℝ^target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    source: usize,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(source: usize, components: Vec<Polynomial>) -> Result<Self> {
        if let Some(c) = components.iter().find(|c| c.nvars() != source) {
            return Err(Error::DimensionMismatch { expected: source, got: c.nvars() });
        }
        Ok(PolyMap { source, components })
    }

    pub fn identity(n: usize) -> Self {
        PolyMap { source: n, components: (0..n).map(|i| Polynomial::var(n, i)).collect() }
    }

    pub fn source_dim(&self) -> usize {
        self.source
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.target_dim() != self.source {
            return Err(Error::ArityMismatch { expected: self.source, got: inner.target_dim() });
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<_>>()?;
        Ok(PolyMap { source: inner.source, components: comps })
    }

    /// `F*α`: substitute `F` into the coefficients and expand each
    /// `dy_j` as `Σ ∂F_j/∂x_i dx_i`.
    pub fn pullback(&self, alpha: &DifferentialForm) -> Result<DifferentialForm> {
        if alpha.nvars() != self.target_dim() {
            return Err(Error::DimensionMismatch { expected: self.target_dim(), got: alpha.nvars() });
        }
        let n = self.source;
        let dfs: Vec<DifferentialForm> = self
            .components
            .iter()
            .map(|c| DifferentialForm::function(c.clone().into()).exterior_d())
            .collect();
        let mut out = DifferentialForm::zero(n, alpha.degree());
        for (idx, f) in alpha.terms() {
            let coeff = f.compose(&self.components)?;
            let mut term = DifferentialForm::function(coeff);
            for &j in idx {
                term = term.wedge(&dfs[j])?;
            }
            out = out.add(&term)?;
        }
        out.degree = alpha.degree();
        Ok(out)
    }
}

impl From<&HilbertMap> for PolyMap {
    fn from(hm: &HilbertMap) -> Self {
        PolyMap { source: hm.source_dim(), components: hm.generators.clone() }
    }
}

/// Group invariance: `g*α = α` for finite generators, `L_ξ α = 0` (Cartan
/// formula) for torus generators.
pub fn is_invariant(action: &GroupAction, alpha: &DifferentialForm) -> Result<bool> {
    if action.dim() != alpha.nvars() {
        return Err(Error::DimensionMismatch { expected: action.dim(), got: alpha.nvars() });
    }
    match action {
        GroupAction::Finite(g) => {
            for m in g.generators() {
                let map = PolyMap::new(g.dim(), linear_substitution(m))?;
                if &map.pullback(alpha)? != alpha {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        GroupAction::Torus(_) => {
            for xi in action.infinitesimal_generators() {
                if !lie_derivative(&xi, alpha)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `L_X α = d(X ⌟ α) + X ⌟ dα`.
pub fn lie_derivative(x: &Derivation, alpha: &DifferentialForm) -> Result<DifferentialForm> {
    let a = alpha.interior(x)?.exterior_d();
    let b = alpha.exterior_d().interior(x)?;
    if a.is_zero() {
        return Ok(b);
    }
    a.add(&b)
}

/// `ξ ⌟ α` vanishes modulo the space's equation ideal for every torus
/// generator. Finite groups are vacuously horizontal.
pub fn is_horizontal(action: &GroupAction, alpha: &DifferentialForm, space: &SpaceDef) -> Result<bool> {
    for xi in action.infinitesimal_generators() {
        let c = alpha.interior(&xi)?;
        for (_, f) in c.terms() {
            let nf = normal_form(f.numerator(), space.equations())?;
            if !nf.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_basic(action: &GroupAction, alpha: &DifferentialForm, space: &SpaceDef) -> Result<bool> {
    Ok(is_invariant(action, alpha)? && is_horizontal(action, alpha, space)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DescentOutcome {
    /// A form on the target with `hm*β = α`.
    Witness(DifferentialForm),
    /// No witness with polynomial coefficients up to `bound` over the tried
    /// denominators. Not a refutation.
    Exhausted { bound: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentSummary {
    pub found: bool,
    pub witness: Option<String>,
    pub bound: u32,
    pub denominator: Option<String>,
    pub unknowns: usize,
}

/// Searches for `β` in the Hilbert-map target variables with `hm*β = α`.
///
/// Coefficients of `β` are `P/D` with `P` a polynomial of degree at most
/// `bound` and `D` drawn from `1`, the target coordinates and their
/// pairwise products; the identity `hm*β = α` becomes an exact sparse
/// linear system in the coefficients of `P`. The default bound is
/// `deg(α) + max generator degree`.
pub fn find_descent_witness(
    action: &GroupAction,
    hm: &HilbertMap,
    alpha: &DifferentialForm,
    bound: Option<u32>,
) -> Result<(DescentOutcome, DescentSummary)> {
    let n = action.dim();
    if alpha.nvars() != n || hm.source_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.nvars() });
    }
    let euclid = SpaceDef::euclidean(default_names(n));
    if !is_basic(action, alpha, &euclid)? {
        return Err(Error::NotBasic(alpha.to_string()));
    }
    let k = hm.target_dim();
    let gen_deg = hm.generators.iter().map(Polynomial::total_degree).max().unwrap_or(1);
    let alpha_deg = alpha
        .terms()
        .map(|(_, f)| f.numerator().total_degree().max(f.denominator().total_degree()))
        .max()
        .unwrap_or(0);
    let bound = bound.unwrap_or(alpha_deg + gen_deg);
    let map = PolyMap::from(hm);

    // within a tier, denominators whose pullback is a positive sum of even
    // monomials come first: they vanish on the smallest set upstairs
    let by_sign = |mut tier: Vec<Polynomial>| -> Result<Vec<Polynomial>> {
        let mut keyed = Vec::with_capacity(tier.len());
        for d in tier.drain(..) {
            keyed.push((!manifestly_nonnegative(&d.compose(&hm.generators)?), d));
        }
        keyed.sort_by_key(|(k, _)| *k);
        Ok(keyed.into_iter().map(|(_, d)| d).collect())
    };
    let mut denominators = vec![Polynomial::one(k)];
    denominators.extend(by_sign((0..k).map(|i| Polynomial::var(k, i)).collect())?);
    let mut products = Vec::new();
    for i in 0..k {
        for j in i..k {
            products.push(&Polynomial::var(k, i) * &Polynomial::var(k, j));
        }
    }
    denominators.extend(by_sign(products)?);
    let index_tuples = linalg::subsets(k, alpha.degree());
    let monomials = monomials_up_to(k, bound);
    let mut unknowns_used = 0;
    for den in &denominators {
        // unknown (tuple t, monomial m) ↦ column
        let mut columns: Vec<(usize, Monomial)> = Vec::new();
        let mut pulled: Vec<DifferentialForm> = Vec::new();
        let den_rf = RationalFunction::new(Polynomial::one(k), den.clone())?;
        let mut feasible = true;
        for (ti, t) in index_tuples.iter().enumerate() {
            for m in &monomials {
                let coeff = &RationalFunction::from(Polynomial::from_terms(k, [(m.clone(), Rational::from_integer(1.into()))])) * &den_rf;
                let beta = DifferentialForm::monomial(coeff, t)?;
                match map.pullback(&beta) {
                    Ok(p) => {
                        columns.push((ti, m.clone()));
                        pulled.push(p);
                    }
                    Err(Error::DenominatorVanishes(_)) => {
                        feasible = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !feasible {
                break;
            }
        }
        if !feasible {
            continue;
        }
        unknowns_used = columns.len();
        // clear denominators: every pulled term shares den∘hm up to the α
        // denominators, so compare numerators over a common denominator
        let common = den.compose(&hm.generators)?;
        let alpha_den = alpha
            .terms()
            .fold(Polynomial::one(n), |acc, (_, f)| lcm(&acc, f.denominator()));
        let scale = &common * &alpha_den;
        let mut rows: BTreeMap<(Vec<usize>, Monomial), BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut rhs_map: BTreeMap<(Vec<usize>, Monomial), Rational> = BTreeMap::new();
        let mut ok = true;
        for (col, p) in pulled.iter().enumerate() {
            for (idx, f) in p.terms() {
                let Some(poly) = f.mul_poly(&scale).as_polynomial() else {
                    ok = false;
                    break;
                };
                for (m, c) in poly.terms() {
                    rows.entry((idx.clone(), m.clone())).or_default().insert(col, c.clone());
                }
            }
        }
        for (idx, f) in alpha.terms() {
            let Some(poly) = f.mul_poly(&scale).as_polynomial() else {
                ok = false;
                break;
            };
            for (m, c) in poly.terms() {
                rows.entry((idx.clone(), m.clone())).or_default();
                rhs_map.insert((idx.clone(), m.clone()), c.clone());
            }
        }
        if !ok {
            continue;
        }
        let keys: Vec<_> = rows.keys().cloned().collect();
        let mat: Vec<BTreeMap<usize, Rational>> = keys.iter().map(|k| rows[k].clone()).collect();
        let rhs: Vec<Rational> = keys.iter().map(|k| rhs_map.get(k).cloned().unwrap_or_else(Rational::zero)).collect();
        let Some(sol) = linalg::solve_sparse(mat, rhs, columns.len()) else { continue };
        let mut beta = DifferentialForm::zero(k, alpha.degree());
        for ((ti, m), c) in columns.iter().zip(&sol) {
            if c.is_zero() {
                continue;
            }
            let coeff = &RationalFunction::from(Polynomial::from_terms(k, [(m.clone(), c.clone())])) * &den_rf;
            beta = beta.add(&DifferentialForm::monomial(coeff, &index_tuples[*ti])?)?;
        }
        beta.degree = alpha.degree();
        if &map.pullback(&beta)? != alpha {
            continue;
        }
        let summary = DescentSummary {
            found: true,
            witness: Some(beta.to_string_with(&hm.target_names)),
            bound,
            denominator: Some(den.to_string_with(&hm.target_names)),
            unknowns: unknowns_used,
        };
        return Ok((DescentOutcome::Witness(beta), summary));
    }
    let summary = DescentSummary { found: false, witness: None, bound, denominator: None, unknowns: unknowns_used };
    Ok((DescentOutcome::Exhausted { bound }, summary))
}

fn manifestly_nonnegative(p: &Polynomial) -> bool {
    !p.is_zero() && p.terms().all(|(m, c)| c.is_positive() && m.exponents().iter().all(|e| e % 2 == 0))
}

fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() {
        return b.clone();
    }
    let g = crate::poly::gcd(a, b);
    (a * b).exact_div(&g).expect("gcd divides")
}

/// All monomials in `k` variables of total degree at most `d`.
fn monomials_up_to(k: usize, d: u32) -> Vec<Monomial> {
    fn go(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == k {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{FiniteGroup, TorusAction};
    use crate::poly::parse_rational_function;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn rf(s: &str, v: &[String]) -> RationalFunction {
        parse_rational_function(s, v).unwrap()
    }

    fn form(v: &[String], terms: &[(&str, &[usize])]) -> DifferentialForm {
        let deg = terms.first().map_or(0, |t| t.1.len());
        DifferentialForm::from_terms(v.len(), deg, terms.iter().map(|(c, i)| (rf(c, v), i.to_vec())).collect())
            .unwrap()
    }

    fn cone() -> HilbertMap {
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        HilbertMap::new(
            ["x^2 - y^2", "2*x*y", "x^2 + y^2"].iter().map(|s| Polynomial::parse(s, &xy()).unwrap()).collect(),
            t.clone(),
            vec![Polynomial::parse("s^2 + t^2 - u^2", &t).unwrap()],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn wedge_examples() {
        let v = xy();
        let dx = DifferentialForm::dx(2, 0);
        let dy = DifferentialForm::dx(2, 1);
        assert_eq!(dx.wedge(&dy).unwrap(), form(&v, &[("1", &[0, 1])]));
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let a = form(&v, &[("x", &[1])]);
        let b = form(&v, &[("y", &[0])]);
        assert_eq!(a.wedge(&b).unwrap(), form(&v, &[("-x*y", &[0, 1])]));
    }

    #[test]
    fn d_examples() {
        let v = xy();
        assert_eq!(form(&v, &[("x", &[1])]).exterior_d(), form(&v, &[("1", &[0, 1])]));
        assert!(DifferentialForm::function(rf("7", &v)).exterior_d().is_zero());
        let f = DifferentialForm::function(rf("(x^2 + y^2)/2", &v));
        assert_eq!(f.exterior_d(), form(&v, &[("x", &[0]), ("y", &[1])]));
    }

    #[test]
    fn interior_examples() {
        let v = xy();
        let rot = Derivation::rotation(2, 0, 1);
        let area = form(&v, &[("1", &[0, 1])]);
        assert_eq!(area.interior(&rot).unwrap(), form(&v, &[("-y", &[1]), ("-x", &[0])]));
        assert!(DifferentialForm::function(rf("x", &v)).interior(&rot).unwrap().is_zero());
        let dx = DifferentialForm::dx(2, 0);
        assert_eq!(dx.interior(&Derivation::coordinate(2, 0)).unwrap(), DifferentialForm::function(rf("1", &v)));
    }

    #[test]
    fn parse_round_trip() {
        let v = xy();
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        let sigma = DifferentialForm::parse("1/(4*u) ds^dt", &t, None).unwrap();
        assert_eq!(sigma, form(&t, &[("1/(4*u)", &[0, 1])]));
        let a = DifferentialForm::parse("2*x dx - 2*y dy", &v, None).unwrap();
        assert_eq!(a, form(&v, &[("2*x", &[0]), ("-2*y", &[1])]));
        assert_eq!(DifferentialForm::parse("dy^dx", &v, None).unwrap(), form(&v, &[("-1", &[0, 1])]));
        assert_eq!(DifferentialForm::parse("x^2 - y", &v, None).unwrap().degree(), 0);
        assert_eq!(DifferentialForm::parse("0", &v, Some(2)).unwrap(), DifferentialForm::zero(2, 2));
        assert_eq!(DifferentialForm::parse(&sigma.to_string_with(&t), &t, None).unwrap(), sigma);
        let b = form(&v, &[("x*y - 1", &[0]), ("-x^2", &[1])]);
        assert_eq!(DifferentialForm::parse(&b.to_string_with(&v), &v, None).unwrap(), b);
        assert!(DifferentialForm::parse("dx + x dx^dy", &v, None).is_err());
        assert!(DifferentialForm::parse("dx", &v, Some(2)).is_err());
        assert!(matches!(DifferentialForm::parse("x dx^dz", &v, None), Err(Error::Parse { column: 3, .. })));
    }

    #[test]
    fn cone_pullback() {
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        let sigma = form(&t, &[("1/(4*u)", &[0, 1])]);
        let pulled = PolyMap::from(&cone()).pullback(&sigma).unwrap();
        assert_eq!(pulled, form(&xy(), &[("1", &[0, 1])]));
        assert_eq!(sigma.to_string_with(&t), "(1/(4*u)) ds^dt");
        let area = PolyMap::from(&cone()).pullback(&form(&t, &[("1", &[0, 1])])).unwrap();
        assert_eq!(area, form(&xy(), &[("4*x^2 + 4*y^2", &[0, 1])]));
    }

    #[test]
    fn pullback_checks_denominators() {
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        let sigma = form(&t, &[("1/(u - s)", &[0])]);
        let v = xy();
        let map = PolyMap::new(2, vec![Polynomial::parse("x", &v).unwrap(), Polynomial::zero(2), Polynomial::parse("x", &v).unwrap()]).unwrap();
        assert!(matches!(map.pullback(&sigma), Err(Error::DenominatorVanishes(_))));
    }

    #[test]
    fn invariance_and_horizontality() {
        let v = xy();
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let circle = GroupAction::Torus(TorusAction::circle(1));
        let plane = SpaceDef::euclidean(v.clone());
        let area = form(&v, &[("1", &[0, 1])]);
        let radial = form(&v, &[("x", &[0]), ("y", &[1])]);
        assert!(is_invariant(&z2, &area).unwrap());
        assert!(!is_invariant(&z2, &DifferentialForm::dx(2, 0)).unwrap());
        assert!(is_invariant(&circle, &radial).unwrap());
        assert!(is_horizontal(&z2, &DifferentialForm::dx(2, 0), &plane).unwrap());
        assert!(!is_horizontal(&circle, &area, &plane).unwrap());
        assert!(is_horizontal(&circle, &radial, &plane).unwrap());
        assert!(is_basic(&z2, &area, &plane).unwrap());
        assert!(!is_basic(&circle, &area, &plane).unwrap());
        assert!(is_basic(&circle, &radial, &plane).unwrap());
    }

    #[test]
    fn descent_examples() {
        let v = xy();
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let hm = cone();
        let area = form(&v, &[("1", &[0, 1])]);
        let (out, summary) = find_descent_witness(&z2, &hm, &area, None).unwrap();
        let DescentOutcome::Witness(beta) = out else { panic!("no witness") };
        assert_eq!(PolyMap::from(&hm).pullback(&beta).unwrap(), area);
        assert!(summary.found);

        let s = DifferentialForm::function(rf("x^2 - y^2", &v));
        let (out, _) = find_descent_witness(&z2, &hm, &s, None).unwrap();
        let DescentOutcome::Witness(beta) = out else { panic!("no witness") };
        assert_eq!(PolyMap::from(&hm).pullback(&beta).unwrap(), s);

        assert!(matches!(
            find_descent_witness(&z2, &hm, &DifferentialForm::dx(2, 0), None),
            Err(Error::NotBasic(_))
        ));
    }

    #[test]
    fn descent_on_the_line() {
        let v: Vec<String> = vec!["x".into()];
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(1));
        let hm = HilbertMap::new(vec![Polynomial::parse("x^2", &v).unwrap()], vec!["s".into()], vec![], vec![]).unwrap();
        let f = DifferentialForm::function(rf("3*x^4 - x^2 + 2", &v));
        let (out, _) = find_descent_witness(&z2, &hm, &f, None).unwrap();
        let DescentOutcome::Witness(beta) = out else { panic!("no witness") };
        assert_eq!(beta.to_string_with(&["s".to_string()]), "3*s^2 - s + 2");
    }
}
