use serde::Serialize;

use super::Derivation;
use crate::poly::{normal_form, Membership, Polynomial};
use crate::space::SpaceDef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Admissible,
    Inadmissible,
    Inconclusive,
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Symbolic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityVerdict {
    pub verdict: Verdict,
    pub provenance: Provenance,
    /// Normal form of `X(f)` for each equation generator `f`.
    pub remainders: Vec<Polynomial>,
}

impl AdmissibilityVerdict {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }

    pub fn is_inadmissible(&self) -> bool {
        self.verdict == Verdict::Inadmissible
    }
}

const NUMERIC_TOL: f64 = 1e-9;

/// Tests `X(𝔫) ⊆ 𝔫` on the equation generators.
///
/// Zero normal forms certify admissibility. A nonzero normal form is
/// conclusive when the generators are a Gröbner basis; otherwise `X(f)` is
/// evaluated on declared samples and stratum samples.
pub fn is_admissible(space: &SpaceDef, x: &Derivation) -> AdmissibilityVerdict {
    assert_eq!(x.nvars(), space.nvars(), "derivation and space dimensions differ");
    let mut all_zero = true;
    let mut any_certain_nonmember = false;
    let mut remainders = Vec::new();
    let mut images = Vec::new();
    for f in space.equations() {
        let xf = x.apply(f);
        let nf = normal_form(&xf, space.equations()).expect("arity checked");
        match nf.membership {
            Membership::Member => {}
            Membership::NonMember => {
                all_zero = false;
                any_certain_nonmember = true;
            }
            Membership::Inconclusive => all_zero = false,
        }
        remainders.push(nf.remainder);
        images.push(xf);
    }
    let symbolic = |verdict| AdmissibilityVerdict {
        verdict,
        provenance: Provenance::Symbolic,
        remainders: remainders.clone(),
    };
    if all_zero {
        return symbolic(Verdict::Admissible);
    }
    if any_certain_nonmember {
        return symbolic(Verdict::Inadmissible);
    }
    let mut points: Vec<Vec<f64>> = space
        .samples()
        .iter()
        .map(|p| crate::to_f64_point(p))
        .collect();
    points.extend(space.stratum_samples(16, 0xad));
    if points.is_empty() {
        return symbolic(Verdict::Inconclusive);
    }
    let compiled: Vec<_> = images.iter().map(Polynomial::compile).collect();
    let ok = points
        .iter()
        .all(|p| compiled.iter().all(|c| c.eval(p).abs() <= NUMERIC_TOL));
    AdmissibilityVerdict {
        verdict: if ok { Verdict::Admissible } else { Verdict::Inadmissible },
        provenance: Provenance::Numeric,
        remainders,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let circle = SpaceDef::parse(&["x", "y"], &["x^2 + y^2 - 1"], &[]).unwrap();
        let v = is_admissible(&circle, &Derivation::rotation(2, 0, 1));
        assert!(v.is_admissible());
        assert_eq!(v.provenance, Provenance::Symbolic);
        assert!(v.remainders[0].is_zero());

        let axis = SpaceDef::parse(&["x", "y"], &["y"], &[]).unwrap();
        let v = is_admissible(&axis, &Derivation::coordinate(2, 1));
        assert!(v.is_inadmissible());
        assert_eq!(v.remainders[0], Polynomial::one(2));

        let cone = SpaceDef::parse(&["s", "t", "u"], &["s^2 + t^2 - u^2"], &[]).unwrap();
        let radial = Derivation::radial(3);
        let f = &cone.equations()[0];
        assert_eq!(radial.apply(f), f.scale(&crate::q(2)));
        assert!(is_admissible(&cone, &radial).is_admissible());
    }

    #[test]
    fn euclidean_space_admits_everything() {
        let plane = SpaceDef::euclidean(vec!["x".into(), "y".into()]);
        assert!(is_admissible(&plane, &Derivation::coordinate(2, 1)).is_admissible());
    }

    #[test]
    fn inconclusive_without_groebner_basis_or_samples() {
        // x^2 - y, xy - 1 is not a Gröbner basis under graded-lex
        let s = SpaceDef::parse(&["x", "y"], &["x^2 - y", "x*y - 1"], &[]).unwrap();
        assert!(!s.equations_are_groebner());
        let v = is_admissible(&s, &Derivation::coordinate(2, 0));
        assert_eq!(v.verdict, Verdict::Inconclusive);
        let s = s.with_samples(vec![crate::qpoint(&[1, 1])]).unwrap();
        let v = is_admissible(&s, &Derivation::coordinate(2, 0));
        assert_eq!(v.verdict, Verdict::Inadmissible);
        assert_eq!(v.provenance, Provenance::Numeric);
    }
}
