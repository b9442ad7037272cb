use rayon::prelude::*;
use serde::Serialize;

use super::{is_admissible, Derivation, FlowEngine, FlowParams, FlowStatus};
use crate::error::{Error, Result};
use crate::space::{Inequality, Projector, Relation, SpaceDef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// Every probe trajectory stays in the set over the window or escapes
    /// every compact set.
    VectorField,
    /// Some maximal integral curve has a half-open domain.
    DerivationOnly,
    /// The probe criterion does not apply (e.g. the set is not locally
    /// compact) or the integrator could not decide.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyParams {
    /// Flow window `[-window, window]` integrated from each probe.
    pub window: f64,
    pub flow: FlowParams,
    /// Random points drawn on the space in addition to the given probes.
    pub random_probes: usize,
    /// Points drawn on the boundary of each inequality.
    pub boundary_probes: usize,
    pub seed: u64,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        ClassifyParams {
            window: 2.0,
            flow: FlowParams::default(),
            random_probes: 12,
            boundary_probes: 6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeOutcome {
    pub point: Vec<f64>,
    pub forward: Option<FlowStatus>,
    pub backward: Option<FlowStatus>,
    /// Set when an active inequality blocks one flow direction at the probe.
    pub blocked: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub verdict: Classification,
    pub reason: String,
    pub probes: Vec<ProbeOutcome>,
}

const ACTIVE_TOL: f64 = 1e-9;

/// Decides on probes whether the restriction of `x` to `space` is a vector
/// field, i.e. whether its maximal integral curves have open domains.
pub fn classify(
    space: &SpaceDef,
    x: &Derivation,
    probes: &[Vec<f64>],
    params: &ClassifyParams,
) -> Result<ClassifyReport> {
    if x.nvars() != space.nvars() {
        return Err(Error::DimensionMismatch { expected: space.nvars(), got: x.nvars() });
    }
    if is_admissible(space, x).is_inadmissible() {
        return Err(Error::Inadmissible(x.to_string_with(space.var_names())));
    }
    if !space.locally_compact() {
        return Ok(ClassifyReport {
            verdict: Classification::Unknown,
            reason: "space is not locally compact (strict inequality present); \
                     the open-domain criterion does not apply"
                .into(),
            probes: Vec::new(),
        });
    }

    let mut points: Vec<Vec<f64>> = Vec::new();
    for p in probes {
        if p.len() != space.nvars() {
            return Err(Error::DimensionMismatch { expected: space.nvars(), got: p.len() });
        }
        if !space.contains_f64(p, 1e-9)? {
            return Err(Error::PointNotOnSpace);
        }
        points.push(p.clone());
    }
    points.extend(space.samples().iter().map(|s| crate::to_f64_point(s)));
    points.extend(space.stratum_samples(4, params.seed ^ 0x51));
    points.extend(space.random_points(params.random_probes, params.seed));
    points.extend(boundary_points(space, params.boundary_probes, params.seed ^ 0xb0));

    let active: Vec<&Inequality> = space
        .inequalities()
        .iter()
        .chain(space.pieces().iter().flat_map(|p| &p.inequalities))
        .collect();
    let engine = FlowEngine::new(space, x);
    let field = x.compile();
    let outcomes: Vec<ProbeOutcome> = points
        .par_iter()
        .map(|p| {
            let v = field.eval(p);
            let blocked = active.iter().find_map(|g| {
                if g.relation != Relation::NonNegative || g.poly.compile().eval(p).abs() > ACTIVE_TOL {
                    return None;
                }
                let grad: Vec<f64> =
                    g.poly.gradient().iter().map(|d| d.compile().eval(p)).collect();
                let dot: f64 = grad.iter().zip(&v).map(|(a, b)| a * b).sum();
                if dot.abs() <= ACTIVE_TOL {
                    return None;
                }
                let dir = if dot > 0.0 { "backward" } else { "forward" };
                Some(format!(
                    "{dir} flow leaves {} immediately",
                    g.to_string_with(space.var_names())
                ))
            });
            if blocked.is_some() {
                return ProbeOutcome { point: p.clone(), forward: None, backward: None, blocked };
            }
            let fw = engine.run(p, params.window, &params.flow).status;
            let bw = engine.run(p, -params.window, &params.flow).status;
            ProbeOutcome { point: p.clone(), forward: Some(fw), backward: Some(bw), blocked: None }
        })
        .collect();

    let fmt = |p: &[f64]| p.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", ");
    if let Some(o) = outcomes.iter().find(|o| o.blocked.is_some()) {
        return Ok(ClassifyReport {
            verdict: Classification::DerivationOnly,
            reason: format!("at boundary probe ({}): {}", fmt(&o.point), o.blocked.as_ref().expect("set")),
            probes: outcomes,
        });
    }
    let exit = outcomes.iter().find_map(|o| {
        [o.forward, o.backward].into_iter().flatten().find_map(|s| match s {
            FlowStatus::LeftSet { t_exit } => Some((o, t_exit)),
            _ => None,
        })
    });
    if let Some((o, t)) = exit {
        return Ok(ClassifyReport {
            verdict: Classification::DerivationOnly,
            reason: format!(
                "trajectory from ({}) reaches the boundary at t = {t:.9} and cannot be continued",
                fmt(&o.point)
            ),
            probes: outcomes,
        });
    }
    let stalled = outcomes.iter().find(|o| {
        [o.forward, o.backward].into_iter().flatten().any(|s| matches!(s, FlowStatus::Stalled { .. }))
    });
    if let Some(o) = stalled {
        return Ok(ClassifyReport {
            verdict: Classification::Unknown,
            reason: format!("integration stalled from ({})", fmt(&o.point)),
            probes: outcomes,
        });
    }
    Ok(ClassifyReport {
        verdict: Classification::VectorField,
        reason: format!(
            "all {} probe trajectories stay in the set over [-{w}, {w}] or blow up",
            outcomes.len(),
            w = params.window
        ),
        probes: outcomes,
    })
}

/// Points where some inequality is active, obtained by projecting random
/// points onto the equations together with that inequality's polynomial.
fn boundary_points(space: &SpaceDef, per_inequality: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let all: Vec<&Inequality> = space
        .inequalities()
        .iter()
        .chain(space.pieces().iter().flat_map(|p| &p.inequalities))
        .collect();
    for g in all {
        let mut eqs = space.equations().to_vec();
        eqs.push(g.poly.clone());
        let proj = Projector::from_equations(&eqs, space.nvars());
        let mut found = 0;
        for _ in 0..50 * per_inequality.max(1) {
            if found == per_inequality {
                break;
            }
            let x: Vec<f64> = (0..space.nvars()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y = proj.project(&x, 50, 1e-14);
            if proj.residual(&y) <= 1e-12 && space.contains_f64(&y, 1e-10).unwrap_or(false) {
                out.push(y);
                found += 1;
            }
        }
    }
    out
}
