use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{default_names, gcd, Polynomial};
use crate::error::{Error, Result};
use crate::Rational;

/// Quotient of two polynomials in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds and reduces `num / den`. Fails when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DenominatorVanishes("zero denominator".into()));
        }
        assert_eq!(num.nvars(), den.nvars(), "nvars mismatch in rational function");
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Polynomial, den: Polynomial) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RationalFunction { num, den: Polynomial::one(n) };
        }
        if let Some(c) = den.constant_value() {
            return RationalFunction { num: num.scale(&c.recip()), den: Polynomial::one(n) };
        }
        let (num, den) = match num.exact_div(&den) {
            Some(quot) => (quot, Polynomial::one(n)),
            None => {
                let g = gcd(&num, &den);
                if g.is_constant() {
                    (num, den)
                } else {
                    (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
                }
            }
        };
        let lc = den.leading_coefficient().recip();
        RationalFunction { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn zero(nvars: usize) -> Self {
        Polynomial::zero(nvars).into()
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::one(nvars).into()
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::constant(nvars, c).into()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.den.constant_value().map(|c| self.num.scale(&c.recip()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }.normalize_zero()
    }

    fn normalize_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero(self.nvars())
        } else {
            self
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::reduced(&self.num * p, self.den.clone())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::reduced(self.den.clone(), self.num.clone()))
        }
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::DenominatorVanishes("denominator is zero at the point".into()));
        }
        Ok(self.num.eval(x)? / d)
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64> {
        Ok(self.num.eval_f64(x)? / self.den.eval_f64(x)?)
    }

    /// Substitutes polynomials for the variables. Fails when the
    /// denominator becomes identically zero.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Self> {
        let num = self.num.compose(subs)?;
        let den = self.den.compose(subs)?;
        if den.is_zero() {
            return Err(Error::DenominatorVanishes(
                "denominator vanishes identically after substitution".into(),
            ));
        }
        Ok(Self::reduced(num, den))
    }

    pub fn derivative(&self, i: usize) -> Self {
        if self.den.is_constant() {
            return Self::reduced(self.num.derivative(i), self.den.clone());
        }
        let top = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::reduced(top, &self.den * &self.den)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let num = self.num.to_string_with(names);
        if self.den.is_one_poly() {
            return num;
        }
        let den = self.den.to_string_with(names);
        // 1/4 over u prints as 1/(4*u)
        if let Some(c) = self.num.constant_value().filter(|c| !c.is_integer()) {
            return format!("{}/({}*{})", c.numer(), c.denom(), wrap_sum(&self.den, den));
        }
        let num = if self.num.num_terms() > 1 { format!("({num})") } else { num };
        let single_factor = self.den.num_terms() == 1
            && self.den.leading_coefficient().is_one()
            && self
                .den
                .leading_term()
                .is_some_and(|(m, _)| m.exponents().iter().filter(|&&e| e > 0).count() == 1);
        let den = if single_factor { den } else { format!("({den})") };
        format!("{num}/{den}")
    }
}

fn wrap_sum(p: &Polynomial, s: String) -> String {
    if p.num_terms() > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl Polynomial {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: Polynomial::one(n) }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars())))
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduced(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.nvars());
        }
        RationalFunction::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}
