//! Exact sparse multivariate polynomials over ℚ.
//!
//! Monomials are ordered graded-lexicographically (total degree first, then
//! lexicographic with `x1 > x2 > ...`). All arithmetic is exact.

mod division;
mod gcd;
mod parse;
mod ratfun;
pub mod sample;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub use division::{is_groebner_basis, normal_form, reduce, Membership, NormalForm};
pub use gcd::gcd;
pub use parse::{parse_rational, parse_rational_function};
pub(crate) use parse::{differential_index, parse_coefficient, split_last_factor, split_summands};
pub use ratfun::RationalFunction;

/// The monomial order used throughout the crate. Only graded-lex is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    GradedLex,
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (xi, &e) in x.iter().zip(&self.0) {
            if e > 0 {
                acc *= num_traits::pow(xi.clone(), e as usize);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients in `nvars` variables.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// The linear form `Σ cᵢ xᵢ`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(m, c);
        }
        p
    }

    /// Parses the polynomial grammar (`+ - * / ^`, parentheses, integer
    /// literals, declared variable names). Division is allowed only by
    /// nonzero constants.
    pub fn parse(s: &str, vars: &[String]) -> Result<Self> {
        let rf = parse_rational_function(s, vars)?;
        rf.as_polynomial().ok_or_else(|| Error::Parse {
            column: 1,
            message: format!("`{s}` is not a polynomial (non-constant denominator)"),
        })
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Constant value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// True when every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn check_point_len(&self, len: usize) -> Result<()> {
        if len != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: len });
        }
        Ok(())
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        self.check_point_len(x.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval(x);
        }
        Ok(acc)
    }

    /// IEEE double evaluation at a float point.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        self.check_point_len(x.len())?;
        Ok(self.compile().eval(x))
    }

    /// Float-coefficient copy for repeated numeric evaluation.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let powers = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e as i32))
                        .collect();
                    (c.to_f64().unwrap_or(f64::NAN), powers)
                })
                .collect(),
        }
    }

    /// Substitutes `subs[i]` for variable `i`. The result lives in the
    /// variables of the substituted polynomials.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: subs.len() });
        }
        let target = match subs.first() {
            Some(s) => s.nvars,
            None => 0,
        };
        if let Some(bad) = subs.iter().find(|s| s.nvars != target) {
            return Err(Error::DimensionMismatch { expected: target, got: bad.nvars });
        }
        // cache powers of each substitution
        let mut powers: Vec<Vec<Polynomial>> = subs
            .iter()
            .map(|s| vec![Polynomial::one(target), s.clone()])
            .collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Embeds into a ring with more variables; variable `i` maps to `map[i]`.
    pub fn rename_vars(&self, new_nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; new_nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] -= 1;
            out.add_term(nm, c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Exact quotient `self / d` when `d` divides `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, d.nvars);
        let (lm, lc) = d.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = lm.quotient_of(m)?;
            let qc = c / &lc;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Leading coefficient under graded-lex (zero for the zero polynomial).
    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Canonical string with the given variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = format_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
        match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Default variable names `x1, ..., xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in addition");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in subtraction");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in multiplication");
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Polynomial with `f64` coefficients for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, pw)| pw.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

/// Jacobian matrix: entry `(i, j)` is `∂pᵢ/∂xⱼ`.
pub fn jacobian(ps: &[Polynomial]) -> Vec<Vec<Polynomial>> {
    ps.iter().map(Polynomial::gradient).collect()
}

/// Evaluates a polynomial matrix at a rational point.
pub fn eval_matrix(m: &[Vec<Polynomial>], x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    m.iter()
        .map(|row| row.iter().map(|p| p.eval(x)).collect())
        .collect()
}

/// Evaluates a polynomial matrix at a float point.
pub fn eval_matrix_f64(m: &[Vec<Polynomial>], x: &[f64]) -> Result<Vec<Vec<f64>>> {
    m.iter()
        .map(|row| row.iter().map(|p| p.eval_f64(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qf};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str, v: &[&str]) -> Polynomial {
        Polynomial::parse(s, &names(v)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let cone = p("x^2 + y^2 - u^2", &["x", "y", "u"]);
        assert_eq!(cone.eval(&[q(3), q(4), q(5)]).unwrap(), q(0));
        let lines = p("x^2*y - x*y^2", &["x", "y"]);
        assert_eq!(lines.eval(&[q(1), q(1)]).unwrap(), q(0));
        let t = p("2*x*y", &["x", "y"]);
        assert_eq!(t.eval(&[qf(1, 2), qf(1, 3)]).unwrap(), qf(1, 3));
        assert!((t.eval_f64(&[0.5, 1.0 / 3.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let t = p("2*x*y", &["x", "y"]);
        assert_eq!(
            t.eval(&[q(1)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn cone_relation_composes_to_zero() {
        let rel = p("s^2 + t^2 - u^2", &["s", "t", "u"]);
        let v = ["x", "y"];
        let gens = vec![p("x^2 - y^2", &v), p("2*x*y", &v), p("x^2 + y^2", &v)];
        assert!(rel.compose(&gens).unwrap().is_zero());
    }

    #[test]
    fn arithmetic_examples() {
        let v = ["x", "y"];
        let a = p("x + y", &v);
        assert_eq!(&a + &Polynomial::zero(2), a);
        assert_eq!(&a * &p("x - y", &v), p("x^2 - y^2", &v));
        let ids = vec![Polynomial::var(2, 0), Polynomial::var(2, 1)];
        assert_eq!(a.compose(&ids).unwrap(), a);
        assert_eq!(
            a.compose(&ids[..1]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn jacobian_examples() {
        let v = ["x", "y"];
        let j = jacobian(&[p("x^2*y - x*y^2", &v)]);
        assert_eq!(j[0], vec![p("2*x*y - y^2", &v), p("x^2 - 2*x*y", &v)]);
        let j = jacobian(&[Polynomial::constant(2, q(7))]);
        assert!(j[0].iter().all(Polynomial::is_zero));
        let w = ["x", "y", "z"];
        let j = jacobian(&[p("x*y", &w), p("y*z", &w), p("z*x", &w)]);
        let at0 = eval_matrix(&j, &[q(0), q(0), q(0)]).unwrap();
        assert!(at0.iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn canonical_printing_is_graded_lex_descending() {
        let v = names(&["x", "y"]);
        let a = Polynomial::parse("1/2*y + x^2 - 3 - 2*x*y", &v).unwrap();
        assert_eq!(a.to_string_with(&v), "x^2 - 2*x*y + 1/2*y - 3");
        assert_eq!(Polynomial::parse(&a.to_string_with(&v), &v).unwrap(), a);
        assert_eq!(Polynomial::zero(2).to_string_with(&v), "0");
        assert_eq!(p("-x", &["x", "y"]).to_string_with(&v), "-x");
    }

    #[test]
    fn exact_division() {
        let v = ["x", "y"];
        let a = p("x^3 - x*y^2", &v);
        assert_eq!(a.exact_div(&p("x - y", &v)).unwrap(), p("x^2 + x*y", &v));
        assert!(a.exact_div(&p("x + 1", &v)).is_none());
    }
}
