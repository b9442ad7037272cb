//! Multivariate division under graded-lex and ideal-membership verdicts.
//!
//! A zero remainder always certifies membership. A nonzero remainder only
//! certifies non-membership when the divisors form a Gröbner basis, which is
//! checked with Buchberger's S-pair criterion.

use num_traits::Zero;

use super::Polynomial;
use crate::error::{Error, Result};

/// Outcome of an ideal-membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Remainder zero: the polynomial lies in the ideal.
    Member,
    /// Remainder nonzero and the generators are a Gröbner basis.
    NonMember,
    /// Remainder nonzero but the generators are not a Gröbner basis.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub remainder: Polynomial,
    pub membership: Membership,
}

/// Remainder of `p` on division by `gens` (full reduction, graded-lex).
pub fn reduce(p: &Polynomial, gens: &[Polynomial]) -> Polynomial {
    let gens: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    let leads: Vec<_> = gens
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term().expect("nonzero");
            (m.clone(), c.clone())
        })
        .collect();
    let n = p.nvars();
    let mut rest = p.clone();
    let mut rem = Polynomial::zero(n);
    while let Some((m, c)) = rest.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        let hit = leads.iter().enumerate().find_map(|(k, (lm, lc))| {
            lm.quotient_of(&m).map(|qm| (k, qm, &c / lc))
        });
        match hit {
            Some((k, qm, qc)) => {
                rest = &rest - &gens[k].mul_monomial(&qm, &qc);
            }
            None => {
                let t = Polynomial::from_terms(n, [(m, c)]);
                rest = &rest - &t;
                rem = &rem + &t;
            }
        }
    }
    rem
}

/// Normal form of `p` modulo the ideal generated by `gens`, with a certainty
/// flag for the membership verdict.
pub fn normal_form(p: &Polynomial, gens: &[Polynomial]) -> Result<NormalForm> {
    if let Some(g) = gens.iter().find(|g| g.nvars() != p.nvars()) {
        return Err(Error::DimensionMismatch { expected: p.nvars(), got: g.nvars() });
    }
    let remainder = reduce(p, gens);
    let membership = if remainder.is_zero() {
        Membership::Member
    } else if is_groebner_basis(gens) {
        Membership::NonMember
    } else {
        Membership::Inconclusive
    };
    Ok(NormalForm { remainder, membership })
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).expect("lcm"), &cf.recip());
    let b = g.mul_monomial(&mg.quotient_of(&l).expect("lcm"), &cg.recip());
    &a - &b
}

/// Buchberger criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis(gens: &[Polynomial]) -> bool {
    let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let (mi, _) = gens[i].leading_term().expect("nonzero");
            let (mj, _) = gens[j].leading_term().expect("nonzero");
            // coprime leading monomials reduce to zero automatically
            let coprime = mi
                .exponents()
                .iter()
                .zip(mj.exponents())
                .all(|(a, b)| a.is_zero() || b.is_zero());
            if coprime {
                continue;
            }
            if !reduce(&s_polynomial(&gens[i], &gens[j]), &gens).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn p(s: &str) -> Polynomial {
        let v: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        Polynomial::parse(s, &v).unwrap()
    }

    #[test]
    fn membership_examples() {
        let circle = [p("x^2 + y^2 - 1")];
        let nf = normal_form(&p("-2*x*y + 2*x*y"), &circle).unwrap();
        assert!(nf.remainder.is_zero());
        assert_eq!(nf.membership, Membership::Member);
        let nf = normal_form(&p("2*(x^2 + y^2 - 1)"), &circle).unwrap();
        assert_eq!(nf.membership, Membership::Member);
        let nf = normal_form(&Polynomial::one(3), &[p("y")]).unwrap();
        assert_eq!(nf.remainder, Polynomial::constant(3, q(1)));
        assert_eq!(nf.membership, Membership::NonMember);
    }

    #[test]
    fn groebner_criterion() {
        assert!(is_groebner_basis(&[p("x*y"), p("y*z"), p("z*x")]));
        assert!(is_groebner_basis(&[p("x^2 + y^2 - 1")]));
        assert!(!is_groebner_basis(&[p("x^2 - y"), p("x*y - 1")]));
    }

    #[test]
    fn inconclusive_when_not_groebner() {
        // x^2 - y, xy - 1: y^2 - x lies in the ideal but does not reduce.
        let gens = [p("x^2 - y"), p("x*y - 1")];
        let nf = normal_form(&p("y^2 - x"), &gens).unwrap();
        assert_eq!(nf.membership, Membership::Inconclusive);
    }

    #[test]
    fn arity_checked() {
        let other = Polynomial::var(2, 0);
        assert!(normal_form(&p("x"), &[other]).is_err());
    }
}
