//! Adaptive Dormand–Prince integration of ambient fields, with Newton
//! projection back onto the equation set and exit detection on the
//! inequality constraints.

use serde::Serialize;

use super::{CompiledField, Derivation};
use crate::error::{Error, Result};
use crate::poly::CompiledPoly;
use crate::space::{Inequality, Piece, Projector, SpaceDef};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowParams {
    /// Initial step size.
    pub step: f64,
    /// Absolute and relative local error tolerance.
    pub tol: f64,
    /// Project onto the equation set after every accepted step.
    pub project: bool,
    pub max_steps: usize,
    /// Trajectories leaving this ball count as blow-up.
    pub blow_up_radius: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams { step: 1e-2, tol: 1e-10, project: true, max_steps: 200_000, blow_up_radius: 1e8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FlowStatus {
    Completed,
    /// The trajectory left the set; `t_exit` is located to within `1e-9`.
    LeftSet { t_exit: f64 },
    BlowUp { t: f64 },
    /// Step size fell below `1e-12` or the step budget ran out.
    Stalled { t: f64 },
}

impl FlowStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, FlowStatus::Completed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowResult {
    /// `(t, x)` samples in increasing time order. A backward flow therefore
    /// starts at its furthest point and ends at the initial point.
    pub trajectory: Vec<(f64, Vec<f64>)>,
    pub status: FlowStatus,
    /// Largest equation residual seen along the trajectory.
    pub drift_max: f64,
}

impl FlowResult {
    /// The last point reached in the direction of integration.
    pub fn endpoint(&self) -> &[f64] {
        let backward = self.trajectory.len() > 1 && self.trajectory[0].0 < 0.0;
        if backward {
            &self.trajectory[0].1
        } else {
            &self.trajectory.last().expect("nonempty trajectory").1
        }
    }

    /// Time of [`FlowResult::endpoint`].
    pub fn end_time(&self) -> f64 {
        let backward = self.trajectory.len() > 1 && self.trajectory[0].0 < 0.0;
        if backward {
            self.trajectory[0].0
        } else {
            self.trajectory.last().expect("nonempty trajectory").0
        }
    }
}

/// Integrates `X` from `x0` over `[0, t_end]` (or `[t_end, 0]`).
pub fn flow(
    space: &SpaceDef,
    x: &Derivation,
    x0: &[f64],
    t_end: f64,
    params: &FlowParams,
) -> Result<FlowResult> {
    if x.nvars() != space.nvars() {
        return Err(Error::DimensionMismatch { expected: space.nvars(), got: x.nvars() });
    }
    if super::is_admissible(space, x).is_inadmissible() {
        return Err(Error::Inadmissible(x.to_string_with(space.var_names())));
    }
    if !space.contains_f64(x0, 1e-9)? {
        return Err(Error::PointNotOnSpace);
    }
    Ok(FlowEngine::new(space, x).run(x0, t_end, params))
}

type CompiledInequalities = Vec<(CompiledPoly, Inequality)>;

struct CompiledConstraints {
    inequalities: CompiledInequalities,
    pieces: Vec<(Vec<CompiledPoly>, CompiledInequalities)>,
}

impl CompiledConstraints {
    fn new(ineqs: &[Inequality], pieces: &[Piece]) -> Self {
        let comp = |is: &[Inequality]| is.iter().map(|i| (i.poly.compile(), i.clone())).collect();
        CompiledConstraints {
            inequalities: comp(ineqs),
            pieces: pieces
                .iter()
                .map(|p| (p.equations.iter().map(|e| e.compile()).collect(), comp(&p.inequalities)))
                .collect(),
        }
    }

    fn holds(&self, x: &[f64]) -> bool {
        let ineq_ok = |is: &[(CompiledPoly, Inequality)]| {
            is.iter().all(|(c, i)| i.holds_f64(c.eval(x), CONSTRAINT_SLACK))
        };
        ineq_ok(&self.inequalities)
            && (self.pieces.is_empty()
                || self.pieces.iter().any(|(eqs, is)| {
                    eqs.iter().all(|e| e.eval(x).abs() <= 1e-9) && ineq_ok(is)
                }))
    }
}

/// Precompiled field, projector and constraints for repeated integration.
pub(crate) struct FlowEngine {
    field: CompiledField,
    projector: Projector,
    constraints: CompiledConstraints,
}

// Dormand–Prince 5(4) tableau; the field is autonomous so the nodes are unused
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MIN_STEP: f64 = 1e-12;
const EXIT_TOL: f64 = 1e-9;
// keeps trajectories sliding along a boundary from registering as exits
const CONSTRAINT_SLACK: f64 = 1e-10;

impl FlowEngine {
    pub(crate) fn new(space: &SpaceDef, x: &Derivation) -> Self {
        FlowEngine {
            field: x.compile(),
            projector: Projector::new(space),
            constraints: CompiledConstraints::new(space.inequalities(), space.pieces()),
        }
    }

    /// Plain ambient integration: no projection and no constraints.
    pub(crate) fn ambient(x: &Derivation) -> Self {
        FlowEngine {
            field: x.compile(),
            projector: Projector::from_equations(&[], x.nvars()),
            constraints: CompiledConstraints::new(&[], &[]),
        }
    }

    /// One Dormand–Prince step of signed size `h`: fifth-order solution and
    /// the embedded error estimate.
    fn step(&self, y: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
        let n = y.len();
        let mut k = vec![vec![0.0; n]; 7];
        let mut tmp = vec![0.0; n];
        for s in 0..7 {
            for i in 0..n {
                tmp[i] = y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            self.field.eval_into(&tmp, &mut k[s]);
        }
        let y5: Vec<f64> = (0..n).map(|i| y[i] + h * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>()).collect();
        let err: Vec<f64> = (0..n)
            .map(|i| h * (0..7).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>())
            .collect();
        (y5, err)
    }

    fn project(&self, y: Vec<f64>, params: &FlowParams) -> Vec<f64> {
        if params.project && !self.projector.is_trivial() {
            self.projector.project(&y, 5, 1e-12)
        } else {
            y
        }
    }

    pub(crate) fn run(&self, x0: &[f64], t_end: f64, params: &FlowParams) -> FlowResult {
        let dir = if t_end < 0.0 { -1.0 } else { 1.0 };
        let span = t_end.abs();
        let mut traj: Vec<(f64, Vec<f64>)> = vec![(0.0, x0.to_vec())];
        let mut drift = self.projector.residual(x0);
        let mut y = x0.to_vec();
        let mut t = 0.0_f64;
        let mut h = params.step.min(span).max(MIN_STEP);
        let mut status = FlowStatus::Completed;
        let mut steps = 0;
        while t < span {
            if steps >= params.max_steps {
                status = FlowStatus::Stalled { t: dir * t };
                break;
            }
            steps += 1;
            h = h.min(span - t);
            let (y5, err) = self.step(&y, dir * h);
            let scale = |i: usize| params.tol + params.tol * y[i].abs().max(y5[i].abs());
            let en = (0..y.len()).map(|i| (err[i] / scale(i)).abs()).fold(0.0, f64::max);
            if !en.is_finite() || y5.iter().any(|v| !v.is_finite()) {
                h *= 0.2;
                if h < MIN_STEP {
                    status = FlowStatus::BlowUp { t: dir * t };
                    break;
                }
                continue;
            }
            if en > 1.0 {
                h *= (0.9 * en.powf(-0.2)).clamp(0.2, 1.0);
                if h < MIN_STEP {
                    status = FlowStatus::Stalled { t: dir * t };
                    break;
                }
                continue;
            }
            let y_next = self.project(y5, params);
            if !self.constraints.holds(&y_next) {
                let (t_in, y_in, t_exit) = self.locate_exit(&y, t, h, dir, params);
                if t_in > t {
                    drift = drift.max(self.projector.residual(&y_in));
                    traj.push((dir * t_in, y_in));
                }
                status = FlowStatus::LeftSet { t_exit: dir * t_exit };
                break;
            }
            t += h;
            if t > span - 1e-15 * span.max(1.0) {
                t = span;
            }
            drift = drift.max(self.projector.residual(&y_next));
            let norm = y_next.iter().map(|v| v * v).sum::<f64>().sqrt();
            traj.push((dir * t, y_next.clone()));
            y = y_next;
            if norm > params.blow_up_radius {
                status = FlowStatus::BlowUp { t: dir * t };
                break;
            }
            h *= (0.9 * en.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        }
        if dir < 0.0 {
            traj.reverse();
        }
        FlowResult { trajectory: traj, status, drift_max: drift }
    }

    /// Bisects the step length at which the trajectory leaves the
    /// constraints. Returns the last inside time, its point and the exit
    /// time estimate.
    fn locate_exit(
        &self,
        y: &[f64],
        t: f64,
        h: f64,
        dir: f64,
        params: &FlowParams,
    ) -> (f64, Vec<f64>, f64) {
        let (mut lo, mut hi) = (0.0, h);
        let mut inside = y.to_vec();
        while hi - lo > EXIT_TOL {
            let mid = 0.5 * (lo + hi);
            let (ym, _) = self.step(y, dir * mid);
            let ym = self.project(ym, params);
            if self.constraints.holds(&ym) {
                lo = mid;
                inside = ym;
            } else {
                hi = mid;
            }
        }
        (t + lo, inside, t + 0.5 * (lo + hi))
    }
}
