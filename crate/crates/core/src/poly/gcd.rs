//! Multivariate polynomial GCD over ℚ by recursive primitive remainder
//! sequences.

use num_traits::One;

use super::{Monomial, Polynomial};

/// Coefficients of `p` viewed as a univariate polynomial in variable `v`;
/// entry `k` multiplies `v^k`.
fn coeffs_in(p: &Polynomial, v: usize) -> Vec<Polynomial> {
    let n = p.nvars();
    let mut out = vec![Polynomial::zero(n); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let k = m.exponents()[v] as usize;
        let mut e = m.exponents().to_vec();
        e[v] = 0;
        out[k] = &out[k] + &Polynomial::from_terms(n, [(Monomial::from_exponents(e), c.clone())]);
    }
    out
}

fn leading_coeff_in(p: &Polynomial, v: usize) -> Polynomial {
    coeffs_in(p, v).pop().expect("nonempty")
}

fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let mut cs = coeffs_in(p, v).into_iter().filter(|c| !c.is_zero());
    let first = cs.next().expect("nonzero polynomial");
    cs.fold(first.monic(), |acc, c| gcd(&acc, &c))
}

fn primitive_part_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides")
}

fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let n = a.nvars();
    let db = b.degree_in(v);
    let lb = leading_coeff_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = leading_coeff_in(&r, v);
        let mut e = vec![0; n];
        e[v] = dr - db;
        let shift = Polynomial::from_terms(n, [(Monomial::from_exponents(e), num_traits::one())]);
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

/// Greatest common divisor, normalised to leading coefficient 1
/// (`gcd(0, 0) = 0`).
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    assert_eq!(a.nvars(), b.nvars(), "nvars mismatch in gcd");
    let n = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a.exact_div(b).is_some() {
        return b.monic();
    }
    if b.exact_div(a).is_some() {
        return a.monic();
    }
    let v = (0..n)
        .find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0)
        .expect("non-constant input");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        Polynomial::one(n)
    } else {
        let (mut r0, mut r1) = if pa.degree_in(v) >= pb.degree_in(v) { (pa, pb) } else { (pb, pa) };
        loop {
            let r = pseudo_rem(&r0, &r1, v);
            if r.is_zero() {
                break primitive_part_in(&r1, v);
            }
            if r.degree_in(v) == 0 {
                break Polynomial::one(n);
            }
            r0 = r1;
            r1 = primitive_part_in(&r, v);
        }
    };
    let out = (&c * &g).monic();
    debug_assert!(out.leading_coefficient().is_one());
    out
}
