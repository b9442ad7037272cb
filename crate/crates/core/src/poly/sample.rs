//! Seeded random polynomials for property checks and the example gallery.

use rand::Rng;

use super::{Monomial, Polynomial};
use crate::Rational;

/// Random polynomial with up to `nterms` terms of total degree at most
/// `max_degree` and small rational coefficients.
pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    nterms: usize,
) -> Polynomial {
    let terms = (0..nterms).map(|_| {
        let mut budget = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u32; nvars];
        while budget > 0 && nvars > 0 {
            exps[rng.gen_range(0..nvars)] += 1;
            budget -= 1;
        }
        (Monomial::from_exponents(exps), random_rational(rng))
    });
    Polynomial::from_terms(nvars, terms.collect::<Vec<_>>())
}

/// Random rational with numerator in [-9, 9] and denominator in [1, 4].
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
}

/// Random rational point with coordinates from [`random_rational`].
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> Vec<Rational> {
    (0..nvars).map(|_| random_rational(rng)).collect()
}
