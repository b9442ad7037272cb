//! Pushforwards of fields along flows, exact when the flow map is
//! polynomial, and probe-based refutation of local completeness.

use serde::Serialize;

use super::{format_field, is_admissible, Derivation, FlowEngine, FlowParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{format_rational, Polynomial};
use crate::space::SpaceDef;
use crate::Rational;

use num_traits::Zero;

/// Truncated Lie series `Σ tᵏ/k! Xᵏ(xᵢ)` of the flow of `x`, as polynomials
/// in the ambient variables followed by a time variable `t`. Returns `None`
/// unless every series terminates by order `max_order`.
pub fn exact_flow_map(x: &Derivation, max_order: u32) -> Option<Vec<Polynomial>> {
    let n = x.nvars();
    let lift: Vec<usize> = (0..n).collect();
    let t = Polynomial::var(n + 1, n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut term = Polynomial::var(n, i);
        let mut acc = Polynomial::zero(n + 1);
        let mut fact = Rational::from_integer(1.into());
        let mut k = 0;
        loop {
            if term.is_zero() {
                break;
            }
            if k > max_order {
                return None;
            }
            let tk = t.pow(k);
            acc = &acc + &(&term.rename_vars(n + 1, &lift) * &tk).scale(&fact.recip());
            k += 1;
            fact *= Rational::from_integer(k.into());
            term = x.apply(&term);
        }
        out.push(acc);
    }
    Some(out)
}

/// `(exp(tX)_* Y)` as components polynomial in the ambient variables and
/// `t`, when the flow of `X` is polynomial.
pub fn symbolic_pushforward(x: &Derivation, y: &Derivation, max_order: u32) -> Option<Vec<Polynomial>> {
    let n = x.nvars();
    let phi = exact_flow_map(x, max_order)?;
    // ψ = φ at time -t
    let mut neg_t: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n + 1, i)).collect();
    neg_t.push(-Polynomial::var(n + 1, n));
    let psi: Vec<Polynomial> =
        phi.iter().map(|p| p.compose(&neg_t).expect("arity")).collect();
    let mut at_psi = psi.clone();
    at_psi.push(Polynomial::var(n + 1, n));
    let y_at_psi: Vec<Polynomial> = y
        .components()
        .iter()
        .map(|c| c.compose(&psi).expect("arity"))
        .collect();
    let comps = phi
        .iter()
        .map(|p| {
            (0..n).fold(Polynomial::zero(n + 1), |acc, j| {
                let dj = p.derivative(j).compose(&at_psi).expect("arity");
                &acc + &(&dj * &y_at_psi[j])
            })
        })
        .collect();
    Some(comps)
}

/// Specialises a time-dependent field at a rational time.
fn at_time(symbolic: &[Polynomial], t: &Rational) -> Derivation {
    let n = symbolic.len();
    let mut subs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
    subs.push(Polynomial::constant(n, t.clone()));
    Derivation::new(symbolic.iter().map(|c| c.compose(&subs).expect("arity")).collect())
        .expect("component count")
}

const SERIES_ORDER: u32 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Pushforward {
    /// Numeric value of `(exp(tX)_* Y)|ₓ`.
    pub value: Vec<f64>,
    /// Exact field at the requested time, when the flow map is polynomial.
    pub exact: Option<Derivation>,
    /// Exact field with `t` kept symbolic (ambient variables, then `t`).
    pub symbolic: Option<Vec<Polynomial>>,
}

impl Pushforward {
    pub fn symbolic_string(&self, names: &[String]) -> Option<String> {
        let mut names = names.to_vec();
        names.push("t".into());
        self.symbolic.as_ref().map(|s| format_field(s, &names))
    }
}

/// Computes `(exp(tX)_* Y)|ₓ = Dφₜ(φ₋ₜ(x)) · Y(φ₋ₜ(x))`.
///
/// The numeric value uses a central difference of the integrated flow map
/// along `Y` (`h = 1e-5`, one Richardson step). When the Lie series of `X`
/// terminates the exact pushforward is returned as well.
pub fn pushforward_along_flow(
    space: &SpaceDef,
    x: &Derivation,
    y: &Derivation,
    t: f64,
    point: &[f64],
) -> Result<Pushforward> {
    for d in [x, y] {
        if d.nvars() != space.nvars() {
            return Err(Error::DimensionMismatch { expected: space.nvars(), got: d.nvars() });
        }
    }
    if point.len() != space.nvars() {
        return Err(Error::DimensionMismatch { expected: space.nvars(), got: point.len() });
    }
    let symbolic = symbolic_pushforward(x, y, SERIES_ORDER);
    let exact = match (&symbolic, Rational::from_float(t)) {
        (Some(s), Some(tq)) => Some(at_time(s, &tq)),
        _ => None,
    };
    if t == 0.0 {
        return Ok(Pushforward { value: y.eval_f64(point)?, exact, symbolic });
    }
    let params = FlowParams { tol: 1e-13, project: false, ..FlowParams::default() };
    let back = FlowEngine::new(space, x).run(point, -t, &params);
    if !back.status.is_completed() {
        return Err(Error::FlowUndefined(format!("backward flow over {t} ended with {:?}", back.status)));
    }
    let base = back.endpoint().to_vec();
    let dir = y.eval_f64(&base)?;
    let ambient = FlowEngine::ambient(x);
    let flow_at = |s: f64| -> Result<Vec<f64>> {
        let start: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + s * d).collect();
        let r = ambient.run(&start, t, &params);
        if !r.status.is_completed() {
            return Err(Error::FlowUndefined(format!("flow over {t} ended with {:?}", r.status)));
        }
        Ok(r.endpoint().to_vec())
    };
    let central = |h: f64| -> Result<Vec<f64>> {
        let (p, m) = (flow_at(h)?, flow_at(-h)?);
        Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    };
    let h = 1e-5;
    let (d1, d2) = (central(h)?, central(h / 2.0)?);
    let value = d1.iter().zip(&d2).map(|(a, b)| (4.0 * b - a) / 3.0).collect();
    Ok(Pushforward { value, exact, symbolic })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CompletenessVerdict {
    Violated,
    ConsistentOnProbes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessWitness {
    /// Index of the flowing field `X` in the family.
    pub x_index: usize,
    /// Index of the pushed field `Y`.
    pub y_index: usize,
    pub t: f64,
    /// Probe point as exact rationals.
    pub point: Vec<String>,
    pub value: Vec<f64>,
    /// Exact pushforward at `t`, when available.
    pub exact: Option<String>,
    /// Exact pushforward with symbolic `t`, when available.
    pub symbolic: Option<String>,
    /// Least-squares distance of the value from the family span (`0` for
    /// exact refutations).
    pub residual: f64,
    pub provenance: super::Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub verdict: CompletenessVerdict,
    pub probes_checked: usize,
    /// Probes skipped because a flow was undefined.
    pub probes_skipped: usize,
    pub witnesses: Vec<CompletenessWitness>,
    pub tolerance: f64,
}

const SPAN_TOL: f64 = 1e-6;

/// Tests whether `exp(tX)_* Y` stays in the span of the family at each
/// probe, for all ordered pairs of members. Only refutations are
/// conclusive.
pub fn check_local_completeness(
    space: &SpaceDef,
    family: &[Derivation],
    points: &[Vec<Rational>],
    times: &[f64],
) -> Result<CompletenessReport> {
    for d in family {
        if d.nvars() != space.nvars() {
            return Err(Error::DimensionMismatch { expected: space.nvars(), got: d.nvars() });
        }
        if is_admissible(space, d).is_inadmissible() {
            return Err(Error::Inadmissible(d.to_string_with(space.var_names())));
        }
    }
    let mut witnesses = Vec::new();
    let (mut checked, mut skipped) = (0, 0);
    for p in points {
        if !space.contains(p)? {
            return Err(Error::PointNotOnSpace);
        }
        let pf = crate::to_f64_point(p);
        let span_exact = super::values_at(family, p)?;
        let span_f: Vec<Vec<f64>> = span_exact.iter().map(|v| crate::to_f64_point(v)).collect();
        for (xi, x) in family.iter().enumerate() {
            for (yi, y) in family.iter().enumerate() {
                for &t in times {
                    let push = match pushforward_along_flow(space, x, y, t, &pf) {
                        Ok(v) => v,
                        Err(Error::FlowUndefined(_)) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    checked += 1;
                    let witness = |residual, provenance| CompletenessWitness {
                        x_index: xi,
                        y_index: yi,
                        t,
                        point: p.iter().map(format_rational).collect(),
                        value: push.value.clone(),
                        exact: push.exact.as_ref().map(|d| d.to_string_with(space.var_names())),
                        symbolic: push.symbolic_string(space.var_names()),
                        residual,
                        provenance,
                    };
                    if let Some(z) = &push.exact {
                        let v = z.eval(p)?;
                        let nonzero: Vec<Vec<Rational>> =
                            span_exact.iter().filter(|w| w.iter().any(|c| !c.is_zero())).cloned().collect();
                        if !linalg::in_span(&nonzero, &v) {
                            witnesses.push(witness(0.0, super::Provenance::Symbolic));
                        }
                    } else {
                        let norm = push.value.iter().map(|c| c * c).sum::<f64>().sqrt();
                        let r = linalg::span_residual(&span_f, &push.value) / norm.max(1.0);
                        if r > SPAN_TOL {
                            witnesses.push(witness(r, super::Provenance::Numeric));
                        }
                    }
                }
            }
        }
    }
    Ok(CompletenessReport {
        verdict: if witnesses.is_empty() {
            CompletenessVerdict::ConsistentOnProbes
        } else {
            CompletenessVerdict::Violated
        },
        probes_checked: checked,
        probes_skipped: skipped,
        witnesses,
        tolerance: SPAN_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qpoint};

    fn plane() -> SpaceDef {
        SpaceDef::euclidean(vec!["x".into(), "y".into()])
    }

    #[test]
    fn shear_pushforward_is_exact() {
        let s = plane();
        let xdy = Derivation::parse(&["0", "x"], s.var_names()).unwrap();
        let dx = Derivation::coordinate(2, 0);
        let pf = pushforward_along_flow(&s, &xdy, &dx, 1.0, &[0.0, 3.0]).unwrap();
        let expected = Derivation::parse(&["1", "1"], s.var_names()).unwrap();
        assert_eq!(pf.exact.as_ref(), Some(&expected));
        assert_eq!(pf.symbolic_string(s.var_names()).unwrap(), "d_x + t*d_y");
        assert!((pf.value[0] - 1.0).abs() < 1e-6 && (pf.value[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_time_is_identity() {
        let s = plane();
        let rot = Derivation::rotation(2, 0, 1);
        let y = Derivation::parse(&["x*y", "3"], s.var_names()).unwrap();
        let pf = pushforward_along_flow(&s, &rot, &y, 0.0, &[2.0, 1.0]).unwrap();
        assert_eq!(pf.value, vec![2.0, 3.0]);
    }

    #[test]
    fn rotation_pushes_dx_to_dy() {
        let s = plane();
        let pf = pushforward_along_flow(
            &s,
            &Derivation::rotation(2, 0, 1),
            &Derivation::coordinate(2, 0),
            std::f64::consts::FRAC_PI_2,
            &[1.0, 0.0],
        )
        .unwrap();
        assert!(pf.exact.is_none());
        assert!(pf.value[0].abs() < 1e-4 && (pf.value[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn shear_family_not_locally_complete() {
        let s = plane();
        let fam = vec![Derivation::coordinate(2, 0), Derivation::parse(&["0", "x"], s.var_names()).unwrap()];
        let r = check_local_completeness(&s, &fam, &[qpoint(&[0, 2]), qpoint(&[1, 1])], &[1.0]).unwrap();
        assert_eq!(r.verdict, CompletenessVerdict::Violated);
        let w = r.witnesses.iter().find(|w| (w.x_index, w.y_index) == (1, 0)).unwrap();
        assert_eq!(w.point, vec!["0", "2"]);
        assert_eq!(w.exact.as_deref(), Some("d_x + d_y"));
        assert_eq!(w.symbolic.as_deref(), Some("d_x + t*d_y"));
    }

    #[test]
    fn commuting_families_consistent() {
        let s = plane();
        let coords = vec![Derivation::coordinate(2, 0), Derivation::coordinate(2, 1)];
        let pts = vec![qpoint(&[0, 0]), qpoint(&[1, -1])];
        let r = check_local_completeness(&s, &coords, &pts, &[0.5, -1.0]).unwrap();
        assert_eq!(r.verdict, CompletenessVerdict::ConsistentOnProbes);
        let rr = vec![Derivation::rotation(2, 0, 1), Derivation::radial(2)];
        let pts = vec![qpoint(&[1, 0]), vec![q(1) / q(2), q(2)]];
        let r = check_local_completeness(&s, &rr, &pts, &[0.5, -1.0]).unwrap();
        assert_eq!(r.verdict, CompletenessVerdict::ConsistentOnProbes, "{:?}", r.witnesses);
    }

    #[test]
    fn lie_series_terminates_only_for_nilpotent() {
        let s = plane();
        let xdy = Derivation::parse(&["0", "x"], s.var_names()).unwrap();
        let phi = exact_flow_map(&xdy, 8).unwrap();
        let names = vec!["x".to_string(), "y".into(), "t".into()];
        assert_eq!(phi[1].to_string_with(&names), "x*t + y");
        assert!(exact_flow_map(&Derivation::rotation(2, 0, 1), 8).is_none());
    }
}
