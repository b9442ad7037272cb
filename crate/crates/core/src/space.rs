//! Subcartesian spaces presented as semialgebraic subsets of ℝⁿ, and their
//! Zariski and orbital tangent spaces.
//!
//! The equation list of a [`SpaceDef`] is taken to generate the full real
//! vanishing ideal of the point set. Tangent dimensions are only meaningful
//! under that contract: `x² + y²` has real zero set `{0}` but does not
//! generate its vanishing ideal `(x, y)`, and would report a 2-dimensional
//! tangent space at the origin. Nothing here computes real radicals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{is_admissible, Derivation};
use crate::linalg;
use crate::poly::{self, format_rational, is_groebner_basis, CompiledPoly, Polynomial};
use crate::Rational;

use num_traits::{Signed, ToPrimitive, Zero};

/// Inequality kind: `p ≥ 0` or `p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    NonNegative,
    Positive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub poly: Polynomial,
    pub relation: Relation,
}

impl Inequality {
    pub fn non_negative(poly: Polynomial) -> Self {
        Inequality { poly, relation: Relation::NonNegative }
    }

    pub fn positive(poly: Polynomial) -> Self {
        Inequality { poly, relation: Relation::Positive }
    }

    /// Parses `lhs >= rhs`, `lhs > rhs`, `lhs <= rhs` or `lhs < rhs`.
    pub fn parse(s: &str, vars: &[String]) -> Result<Self> {
        for (op, flip, rel) in [
            (">=", false, Relation::NonNegative),
            ("<=", true, Relation::NonNegative),
            (">", false, Relation::Positive),
            ("<", true, Relation::Positive),
        ] {
            if let Some(at) = s.find(op) {
                let (lhs, rhs) = (&s[..at], &s[at + op.len()..]);
                let shift = |e: Error, offset: usize| match e {
                    Error::Parse { column, message } => {
                        Error::Parse { column: column + offset, message }
                    }
                    other => other,
                };
                let l = Polynomial::parse(lhs, vars).map_err(|e| shift(e, 0))?;
                let r = Polynomial::parse(rhs, vars)
                    .map_err(|e| shift(e, s[..at + op.len()].chars().count()))?;
                let poly = if flip { &r - &l } else { &l - &r };
                return Ok(Inequality { poly, relation: rel });
            }
        }
        Err(Error::Parse {
            column: 1,
            message: format!("`{s}` is not an inequality (expected >=, >, <= or <)"),
        })
    }

    pub fn holds(&self, x: &[Rational]) -> Result<bool> {
        let v = self.poly.eval(x)?;
        Ok(match self.relation {
            Relation::NonNegative => !v.is_negative(),
            Relation::Positive => v.is_positive(),
        })
    }

    pub fn holds_f64(&self, v: f64, tol: f64) -> bool {
        match self.relation {
            Relation::NonNegative => v >= -tol,
            Relation::Positive => v > 0.0,
        }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let op = match self.relation {
            Relation::NonNegative => ">=",
            Relation::Positive => ">",
        };
        format!("{} {op} 0", self.poly.to_string_with(names))
    }
}

/// One alternative of a union: the point set is the intersection of the
/// global constraints with at least one piece.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Piece {
    pub equations: Vec<Polynomial>,
    pub inequalities: Vec<Inequality>,
}

impl Piece {
    fn holds(&self, x: &[Rational]) -> Result<bool> {
        for e in &self.equations {
            if !e.eval(x)?.is_zero() {
                return Ok(false);
            }
        }
        for i in &self.inequalities {
            if !i.holds(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn holds_f64(&self, x: &[f64], tol: f64) -> bool {
        self.equations.iter().all(|e| e.compile().eval(x).abs() <= tol)
            && self
                .inequalities
                .iter()
                .all(|i| i.holds_f64(i.poly.compile().eval(x), tol))
    }
}

/// Polynomial parametrisation of a stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumParam {
    pub name: String,
    /// Parameter names; the map components are polynomials in these.
    pub params: Vec<String>,
    pub map: Vec<Polynomial>,
    /// Open constraints on the parameters.
    pub constraints: Vec<Inequality>,
    pub stabilizer: Option<String>,
}

impl StratumParam {
    pub fn domain_dim(&self) -> usize {
        self.params.len()
    }

    /// Random parameter values satisfying the constraints.
    pub fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<Vec<f64>> {
        let d = self.domain_dim();
        let compiled: Vec<(CompiledPoly, &Inequality)> =
            self.constraints.iter().map(|c| (c.poly.compile(), c)).collect();
        let mut out = Vec::new();
        let mut tries = 0;
        while out.len() < count && tries < 1000 * count.max(1) {
            tries += 1;
            let t: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
            if compiled.iter().all(|(p, c)| c.holds_f64(p.eval(&t), 0.0) && p.eval(&t).abs() > 1e-6) {
                out.push(t);
            }
        }
        out
    }

    /// Ambient points on the stratum.
    pub fn sample_points<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<Vec<f64>> {
        let comps: Vec<CompiledPoly> = self.map.iter().map(Polynomial::compile).collect();
        self.sample_params(rng, count)
            .into_iter()
            .map(|t| comps.iter().map(|c| c.eval(&t)).collect())
            .collect()
    }

    /// Numeric immersion check: the Jacobian of the map has full rank
    /// `domain_dim` at every sampled parameter (tolerance `1e-9`).
    pub fn check_immersion<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> Result<()> {
        let jac = poly::jacobian(&self.map);
        for t in self.sample_params(rng, samples) {
            let j = poly::eval_matrix_f64(&jac, &t)?;
            if linalg::numeric_rank(&j, self.domain_dim(), 1e-9) < self.domain_dim() {
                return Err(Error::Invalid(format!(
                    "stratum `{}` is not immersed at parameter {t:?}",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// A semialgebraic subset of ℝⁿ with generators of its vanishing ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceDef {
    var_names: Vec<String>,
    equations: Vec<Polynomial>,
    inequalities: Vec<Inequality>,
    pieces: Vec<Piece>,
    strata: Vec<StratumParam>,
    samples: Vec<Vec<Rational>>,
    groebner: bool,
}

impl SpaceDef {
    /// All of ℝⁿ.
    pub fn euclidean(var_names: Vec<String>) -> Self {
        SpaceDef {
            var_names,
            equations: Vec::new(),
            inequalities: Vec::new(),
            pieces: Vec::new(),
            strata: Vec::new(),
            samples: Vec::new(),
            groebner: true,
        }
    }

    pub fn new(
        var_names: Vec<String>,
        equations: Vec<Polynomial>,
        inequalities: Vec<Inequality>,
    ) -> Result<Self> {
        let n = var_names.len();
        for p in equations.iter().chain(inequalities.iter().map(|i| &i.poly)) {
            if p.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.nvars() });
            }
        }
        let equations: Vec<Polynomial> = equations.into_iter().filter(|e| !e.is_zero()).collect();
        let groebner = is_groebner_basis(&equations);
        Ok(SpaceDef { equations, inequalities, groebner, ..Self::euclidean(var_names) })
    }

    /// Parses equation and inequality strings over the given variables.
    pub fn parse(var_names: &[&str], equations: &[&str], inequalities: &[&str]) -> Result<Self> {
        let names: Vec<String> = var_names.iter().map(|s| s.to_string()).collect();
        let eqs = equations
            .iter()
            .map(|s| Polynomial::parse(s, &names))
            .collect::<Result<Vec<_>>>()?;
        let ineqs = inequalities
            .iter()
            .map(|s| Inequality::parse(s, &names))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, eqs, ineqs)
    }

    pub fn with_piece(mut self, piece: Piece) -> Result<Self> {
        let n = self.nvars();
        for p in piece.equations.iter().chain(piece.inequalities.iter().map(|i| &i.poly)) {
            if p.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.nvars() });
            }
        }
        self.pieces.push(piece);
        Ok(self)
    }

    /// Adds a stratum parametrisation after checking `f ∘ c = 0` exactly for
    /// every equation and the immersion condition numerically.
    pub fn with_stratum(mut self, stratum: StratumParam) -> Result<Self> {
        if stratum.map.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: stratum.map.len() });
        }
        for f in &self.equations {
            if !f.compose(&stratum.map)?.is_zero() {
                return Err(Error::Invalid(format!(
                    "equation {} does not vanish on stratum `{}`",
                    f.to_string_with(&self.var_names),
                    stratum.name
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        stratum.check_immersion(&mut rng, 8)?;
        self.strata.push(stratum);
        Ok(self)
    }

    pub fn with_samples(mut self, samples: Vec<Vec<Rational>>) -> Result<Self> {
        for s in &samples {
            if !self.contains(s)? {
                return Err(Error::Invalid(format!(
                    "sample ({}) is not on the space",
                    s.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                )));
            }
        }
        self.samples.extend(samples);
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn strata(&self) -> &[StratumParam] {
        &self.strata
    }

    pub fn samples(&self) -> &[Vec<Rational>] {
        &self.samples
    }

    /// Whether the equations pass the Buchberger criterion, which makes
    /// nonzero normal forms conclusive.
    pub fn equations_are_groebner(&self) -> bool {
        self.groebner
    }

    /// Syntactic local compactness: no strict inequality anywhere, so the
    /// set is closed in ℝⁿ.
    pub fn locally_compact(&self) -> bool {
        self.inequalities
            .iter()
            .chain(self.pieces.iter().flat_map(|p| &p.inequalities))
            .all(|i| i.relation == Relation::NonNegative)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: len });
        }
        Ok(())
    }

    /// Exact membership of a rational point.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        self.check_len(x.len())?;
        for e in &self.equations {
            if !e.eval(x)?.is_zero() {
                return Ok(false);
            }
        }
        for i in &self.inequalities {
            if !i.holds(x)? {
                return Ok(false);
            }
        }
        if self.pieces.is_empty() {
            return Ok(true);
        }
        for p in &self.pieces {
            if p.holds(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Float membership: equations within `tol`, inequalities `≥ -tol`.
    pub fn contains_f64(&self, x: &[f64], tol: f64) -> Result<bool> {
        self.check_len(x.len())?;
        if self.equation_residual(x) > tol {
            return Ok(false);
        }
        Ok(self.constraints_hold_f64(x, tol))
    }

    /// Inequalities and piece membership only; the global equations are
    /// handled by projection in flows.
    pub fn constraints_hold_f64(&self, x: &[f64], tol: f64) -> bool {
        self.inequalities
            .iter()
            .all(|i| i.holds_f64(i.poly.compile().eval(x), tol))
            && (self.pieces.is_empty() || self.pieces.iter().any(|p| p.holds_f64(x, tol)))
    }

    /// `max |f(x)|` over the equations.
    pub fn equation_residual(&self, x: &[f64]) -> f64 {
        self.equations
            .iter()
            .map(|e| e.compile().eval(x).abs())
            .fold(0.0, f64::max)
    }

    /// Newton projection onto the equation set with minimum-norm steps.
    pub fn project(&self, x: &[f64], max_iter: usize, tol: f64) -> Vec<f64> {
        Projector::new(self).project(x, max_iter, tol)
    }

    /// Zariski tangent space at a rational point: the kernel of the Jacobian
    /// of the equations, computed exactly.
    pub fn zariski_tangent(&self, x: &[Rational]) -> Result<TangentSpace<Rational>> {
        if !self.contains(x)? {
            return Err(Error::PointNotOnSpace);
        }
        let jac = poly::eval_matrix(&poly::jacobian(&self.equations), x)?;
        let basis = linalg::kernel(&jac, self.nvars());
        Ok(TangentSpace { base_point: x.to_vec(), basis })
    }

    /// Zariski tangent dimension at a float point by numeric rank.
    pub fn zariski_dim_f64(&self, x: &[f64], tol: f64) -> Result<usize> {
        let jac = poly::eval_matrix_f64(&poly::jacobian(&self.equations), x)?;
        Ok(self.nvars() - linalg::numeric_rank(&jac, self.nvars(), tol))
    }

    /// Span of the values of `family` at `x`; its dimension is the orbital
    /// rank δ at `x`.
    pub fn orbital_tangent(&self, family: &[Derivation], x: &[Rational]) -> Result<TangentSpace<Rational>> {
        self.check_family(family)?;
        if !self.contains(x)? {
            return Err(Error::PointNotOnSpace);
        }
        let values = crate::fields::values_at(family, x)?;
        let basis = linalg::independent_subset(&values, self.nvars());
        Ok(TangentSpace { base_point: x.to_vec(), basis })
    }

    /// Float version of [`SpaceDef::orbital_tangent`] with numeric rank
    /// tolerance `tol`.
    pub fn orbital_tangent_f64(
        &self,
        family: &[Derivation],
        x: &[f64],
        tol: f64,
    ) -> Result<TangentSpace<f64>> {
        self.check_family(family)?;
        self.check_len(x.len())?;
        let values = family.iter().map(|d| d.eval_f64(x)).collect::<Result<Vec<_>>>()?;
        Ok(TangentSpace { base_point: x.to_vec(), basis: numeric_independent(&values, tol) })
    }

    /// Orbital rank at each sample point.
    pub fn delta_profile(
        &self,
        family: &[Derivation],
        sample: &[Vec<Rational>],
    ) -> Result<Vec<(Vec<Rational>, usize)>> {
        self.check_family(family)?;
        sample
            .iter()
            .map(|x| {
                if !self.contains(x)? {
                    return Err(Error::PointNotOnSpace);
                }
                let values = crate::fields::values_at(family, x)?;
                Ok((x.clone(), linalg::rank(&values, self.nvars())))
            })
            .collect()
    }

    fn check_family(&self, family: &[Derivation]) -> Result<()> {
        for (k, d) in family.iter().enumerate() {
            self.check_len(d.nvars())?;
            let v = is_admissible(self, d);
            if v.is_inadmissible() {
                return Err(Error::Inadmissible(format!(
                    "family member {k} ({}) does not preserve the vanishing ideal",
                    d.to_string_with(&self.var_names)
                )));
            }
        }
        Ok(())
    }

    /// Float sample points of the declared strata.
    pub fn stratum_samples(&self, per_stratum: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.strata
            .iter()
            .flat_map(|s| s.sample_points(&mut rng, per_stratum))
            .collect()
    }

    /// Random points of the space: uniform draws from `[-2, 2]ⁿ` projected
    /// onto the equations and filtered by the constraints.
    pub fn random_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let proj = Projector::new(self);
        let mut out = Vec::new();
        let mut tries = 0;
        while out.len() < count && tries < 200 * count.max(1) {
            tries += 1;
            let x: Vec<f64> = (0..self.nvars()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y = proj.project(&x, 50, 1e-13);
            if self.equation_residual(&y) <= 1e-10 && self.constraints_hold_f64(&y, 0.0) {
                out.push(y);
            }
        }
        out
    }

    /// Checks the point set is nonempty: a declared sample lies on it, the
    /// origin does, or a random projected point does.
    pub fn find_point(&self) -> Result<Vec<f64>> {
        if let Some(s) = self.samples.first() {
            return Ok(s.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect());
        }
        let origin = vec![Rational::zero(); self.nvars()];
        if self.contains(&origin)? {
            return Ok(vec![0.0; self.nvars()]);
        }
        self.random_points(1, 7)
            .pop()
            .ok_or_else(|| Error::Invalid("could not find a point on the space".into()))
    }
}

/// Newton projector onto the zero set of a list of polynomials.
pub(crate) struct Projector {
    eqs: Vec<CompiledPoly>,
    jac: Vec<Vec<CompiledPoly>>,
    n: usize,
}

impl Projector {
    pub(crate) fn new(space: &SpaceDef) -> Self {
        Self::from_equations(space.equations(), space.nvars())
    }

    pub(crate) fn from_equations(eqs: &[Polynomial], n: usize) -> Self {
        Projector {
            eqs: eqs.iter().map(Polynomial::compile).collect(),
            jac: poly::jacobian(eqs)
                .iter()
                .map(|row| row.iter().map(Polynomial::compile).collect())
                .collect(),
            n,
        }
    }

    pub(crate) fn is_trivial(&self) -> bool {
        self.eqs.is_empty()
    }

    pub(crate) fn residual(&self, x: &[f64]) -> f64 {
        self.eqs.iter().map(|e| e.eval(x).abs()).fold(0.0, f64::max)
    }

    pub(crate) fn project(&self, x: &[f64], max_iter: usize, tol: f64) -> Vec<f64> {
        let mut y = x.to_vec();
        if self.eqs.is_empty() {
            return y;
        }
        for _ in 0..max_iter {
            let r: Vec<f64> = self.eqs.iter().map(|e| e.eval(&y)).collect();
            if r.iter().all(|v| v.abs() <= tol) {
                break;
            }
            let j: Vec<Vec<f64>> = self
                .jac
                .iter()
                .map(|row| row.iter().map(|p| p.eval(&y)).collect())
                .collect();
            let step = linalg::pseudo_inverse_apply(&j, self.n, &r);
            for (yi, si) in y.iter_mut().zip(step) {
                *yi -= si;
            }
        }
        y
    }
}

fn numeric_independent(values: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let Some(n) = values.first().map(Vec::len) else { return Vec::new() };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in values {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if linalg::numeric_rank(&trial, n, tol) > basis.len() {
            basis = trial;
        }
    }
    basis
}

/// A tangent space at a point, given by a basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentSpace<T> {
    pub base_point: Vec<T>,
    pub basis: Vec<Vec<T>>,
}

impl<T> TangentSpace<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}
