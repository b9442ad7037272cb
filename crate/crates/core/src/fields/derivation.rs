use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{
    default_names, differential_index, parse_coefficient, split_last_factor, split_summands, CompiledPoly, Polynomial,
    RationalFunction,
};
use crate::Rational;

/// Ambient polynomial vector field `Σ aᵢ ∂ᵢ`, acting on functions by
/// directional derivative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    components: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Invalid("a derivation needs at least one component".into()));
        };
        let n = first.nvars();
        if components.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: components.len() });
        }
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.nvars() });
        }
        Ok(Derivation { components })
    }

    /// Parses one component string per variable.
    pub fn parse(components: &[&str], vars: &[String]) -> Result<Self> {
        let comps = components
            .iter()
            .map(|s| Polynomial::parse(s, vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// Parses `Σ aᵢ*d_xᵢ` as printed by [`Derivation::to_string_with`]; `dx`
    /// is accepted for `d_x` and a bare `d_x` has coefficient 1.
    pub fn parse_expr(s: &str, vars: &[String]) -> Result<Self> {
        let n = vars.len();
        if n == 0 {
            return Err(Error::Invalid("a derivation needs at least one variable".into()));
        }
        let mut comps = vec![Polynomial::zero(n); n];
        if s.trim() == "0" {
            return Ok(Derivation { components: comps });
        }
        for term in split_summands(s)? {
            let (head, last, at) = split_last_factor(&term.text);
            let Some(i) = differential_index(&last, vars) else {
                return Err(Error::Parse {
                    column: term.column + at,
                    message: format!("expected a coordinate field such as d_{}, found `{last}`", vars[0]),
                });
            };
            let c = parse_coefficient(&head, vars, term.column - 1)?;
            let c = c.as_polynomial().ok_or_else(|| Error::Parse {
                column: term.column,
                message: "field coefficients must be polynomials".into(),
            })?;
            comps[i] = if term.negative { &comps[i] - &c } else { &comps[i] + &c };
        }
        Ok(Derivation { components: comps })
    }

    pub fn zero(nvars: usize) -> Self {
        Derivation { components: vec![Polynomial::zero(nvars); nvars] }
    }

    /// The coordinate field `∂ᵢ`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        let mut d = Self::zero(nvars);
        d.components[i] = Polynomial::one(nvars);
        d
    }

    /// Rotation `-xⱼ ∂ᵢ + xᵢ ∂ⱼ` in the `(i, j)` plane.
    pub fn rotation(nvars: usize, i: usize, j: usize) -> Self {
        let mut d = Self::zero(nvars);
        d.components[i] = -Polynomial::var(nvars, j);
        d.components[j] = Polynomial::var(nvars, i);
        d
    }

    /// Euler field `Σ xᵢ ∂ᵢ`.
    pub fn radial(nvars: usize) -> Self {
        Derivation { components: (0..nvars).map(|i| Polynomial::var(nvars, i)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// `X(f) = Σ aᵢ ∂f/∂xᵢ`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(f.nvars(), self.nvars(), "nvars mismatch applying derivation");
        self.components
            .iter()
            .enumerate()
            .fold(Polynomial::zero(self.nvars()), |acc, (i, a)| {
                if a.is_zero() {
                    acc
                } else {
                    &acc + &(a * &f.derivative(i))
                }
            })
    }

    pub fn apply_rational(&self, f: &RationalFunction) -> RationalFunction {
        self.components
            .iter()
            .enumerate()
            .fold(RationalFunction::zero(self.nvars()), |acc, (i, a)| {
                if a.is_zero() {
                    acc
                } else {
                    &acc + &f.derivative(i).mul_poly(a)
                }
            })
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|c| c.eval_f64(x)).collect()
    }

    pub fn compile(&self) -> CompiledField {
        CompiledField { components: self.components.iter().map(Polynomial::compile).collect() }
    }

    /// Lie bracket `[X, Y] = XY - YX`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let components = (0..self.nvars())
            .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
            .collect();
        Derivation { components }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    /// `h X` for a polynomial `h`.
    pub fn mul_poly(&self, h: &Polynomial) -> Derivation {
        Derivation { components: self.components.iter().map(|a| a * h).collect() }
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        format_field(&self.components, names)
    }
}

/// Prints `Σ aᵢ d_xᵢ`; `names` may list more variables than components
/// (e.g. a trailing time parameter).
pub(crate) fn format_field(components: &[Polynomial], names: &[String]) -> String {
    let one = Rational::from_integer(1.into());
    let mut out = String::new();
    for (i, c) in components.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
        let s = c.to_string_with(names);
        let (neg, body) = match c.constant_value() {
            Some(v) if v == one => (false, format!("d_{name}")),
            Some(v) if v == -one.clone() => (true, format!("d_{name}")),
            _ if c.num_terms() == 1 => match s.strip_prefix('-') {
                Some(rest) => (true, format!("{rest}*d_{name}")),
                None => (false, format!("{s}*d_{name}")),
            },
            _ => (false, format!("({s})*d_{name}")),
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars())))
    }
}

/// Float copy of a [`Derivation`] for integrators.
#[derive(Debug, Clone)]
pub struct CompiledField {
    components: Vec<CompiledPoly>,
}

impl CompiledField {
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(x);
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.components.len()];
        self.eval_into(x, &mut out);
        out
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// Values of a family of fields at an exact point.
pub(crate) fn values_at(family: &[Derivation], x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    family.iter().map(|d| d.eval(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn apply_and_bracket() {
        let v = names();
        let rot = Derivation::rotation(2, 0, 1);
        let f = Polynomial::parse("x^2 + y^2", &v).unwrap();
        assert!(rot.apply(&f).is_zero());
        let dx = Derivation::coordinate(2, 0);
        let xdy = Derivation::parse(&["0", "x"], &v).unwrap();
        // [∂x, x∂y] = ∂y
        assert_eq!(dx.bracket(&xdy), Derivation::coordinate(2, 1));
        assert_eq!(rot.bracket(&Derivation::radial(2)), Derivation::zero(2));
    }

    #[test]
    fn display() {
        let v = names();
        assert_eq!(Derivation::rotation(2, 0, 1).to_string_with(&v), "-y*d_x + x*d_y");
        assert_eq!(Derivation::zero(2).to_string_with(&v), "0");
    }

    #[test]
    fn parse_expressions() {
        let v = names();
        let rot = Derivation::rotation(2, 0, 1);
        assert_eq!(Derivation::parse_expr("-y*d_x + x*d_y", &v).unwrap(), rot);
        assert_eq!(Derivation::parse_expr("dx", &v).unwrap(), Derivation::coordinate(2, 0));
        assert_eq!(Derivation::parse_expr("0", &v).unwrap(), Derivation::zero(2));
        let f = Derivation::parse(&["x^2 - 1", "-3*y"], &v).unwrap();
        assert_eq!(Derivation::parse_expr(&f.to_string_with(&v), &v).unwrap(), f);
        assert!(matches!(Derivation::parse_expr("x*dz", &v), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(Derivation::parse_expr("q*dx", &v), Err(Error::Parse { column: 1, .. })));
    }

    #[test]
    fn construction_checks() {
        assert!(Derivation::new(vec![]).is_err());
        assert!(Derivation::new(vec![Polynomial::zero(2)]).is_err());
    }
}
