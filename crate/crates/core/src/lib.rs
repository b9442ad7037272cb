//! Exact and numerical computation on singular spaces that arise as subsets
//! and quotients of Euclidean space.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] exact sparse polynomials and rational functions over ℚ,
//!   normal forms and Jacobians.
//! * [`space`] semialgebraic subsets of ℝⁿ with Zariski and orbital tangent
//!   spaces.
//! * [`actions`] finite orthogonal groups and torus weight actions, orbit-type
//!   stratifications and Hilbert-map embeddings of quotients.
//! * [`fields`] derivations and vector fields: admissibility, flows,
//!   classification, pushforwards and orbit exploration.
//! * [`forms`] exterior calculus with rational-function coefficients and
//!   descent of basic forms through Hilbert maps.
//! * [`hamiltonian`] constant symplectic forms, Hamiltonian fields, momentum
//!   maps, Poisson brackets and zero-level reduction.
//! * [`cli`] the `.sl` space-file format, reports and the `stratlab` front end.
//!
//! Polynomials and forms are always exact; floating point appears only in
//! numeric evaluation, flows and rank estimates.

pub mod actions;
pub mod cli;
pub mod error;
pub mod fields;
pub mod forms;
pub mod hamiltonian;
pub mod linalg;
pub mod poly;
pub mod space;

pub use error::{Error, Result};

/// Arbitrary-precision rational number used for every exact coefficient.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the rational `num/den`.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Exact rational point from integers.
pub fn qpoint(coords: &[i64]) -> Vec<Rational> {
    coords.iter().map(|&c| q(c)).collect()
}

/// Float copy of an exact point.
pub fn to_f64_point(x: &[Rational]) -> Vec<f64> {
    use num_traits::ToPrimitive;
    x.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}
