//! Breadth-first exploration of orbits of a family of fields by composing
//! flows over a time grid.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{is_admissible, Derivation, FlowEngine, FlowParams};
use crate::error::{Error, Result};
use crate::linalg;
use crate::space::SpaceDef;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitParams {
    pub time_grid: Vec<f64>,
    pub depth: usize,
    /// Points closer than this (max-norm) to an existing cloud point are
    /// dropped.
    pub dedup_radius: f64,
    /// Exploration stops once the cloud reaches this size.
    pub max_points: usize,
    /// Relative singular-value threshold for numeric ranks.
    pub rank_tol: f64,
    pub flow: FlowParams,
}

impl Default for OrbitParams {
    fn default() -> Self {
        OrbitParams {
            time_grid: vec![-1.0, -0.5, -0.1, 0.1, 0.5, 1.0],
            depth: 4,
            dedup_radius: 1e-3,
            max_points: 4000,
            rank_tol: 1e-8,
            flow: FlowParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitApprox {
    pub seed: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// Number of flow compositions that first reached each point.
    pub depths: Vec<usize>,
    /// Largest orbital rank seen on the cloud.
    pub est_dim: usize,
    /// Exact orbital rank at the seed.
    pub seed_delta: usize,
    /// Numeric orbital rank at each cloud point (same order as `points`).
    pub tangent_rank_along: Vec<usize>,
    pub drift_max: f64,
    /// Flows that left the set, blew up or stalled and were discarded.
    pub discarded_flows: usize,
    /// Whether `max_points` cut the exploration short.
    pub truncated: bool,
}

struct Grid {
    radius: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl Grid {
    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|c| (c / self.radius).floor() as i64).collect()
    }

    fn near(&self, p: &[f64], points: &[Vec<f64>]) -> bool {
        let base = self.key(p);
        let n = base.len();
        let mut offs = vec![-1i64; n];
        loop {
            let k: Vec<i64> = base.iter().zip(&offs).map(|(b, o)| b + o).collect();
            if let Some(ids) = self.cells.get(&k) {
                if ids.iter().any(|&i| {
                    points[i].iter().zip(p).all(|(a, b)| (a - b).abs() < self.radius)
                }) {
                    return true;
                }
            }
            let mut j = 0;
            while j < n && offs[j] == 1 {
                offs[j] = -1;
                j += 1;
            }
            if j == n {
                return false;
            }
            offs[j] += 1;
        }
    }

    fn insert(&mut self, p: &[f64], idx: usize) {
        self.cells.entry(self.key(p)).or_default().push(idx);
    }
}

/// Explores the orbit of `seed` under compositions of flows of `family`.
///
/// Frontier points are expanded in parallel; the cloud is deduplicated
/// sequentially after each depth level, so the result is deterministic.
pub fn orbit_explore(
    space: &SpaceDef,
    family: &[Derivation],
    seed: &[Rational],
    params: &OrbitParams,
) -> Result<OrbitApprox> {
    for d in family {
        if d.nvars() != space.nvars() {
            return Err(Error::DimensionMismatch { expected: space.nvars(), got: d.nvars() });
        }
        if is_admissible(space, d).is_inadmissible() {
            return Err(Error::Inadmissible(d.to_string_with(space.var_names())));
        }
    }
    if !space.contains(seed)? {
        return Err(Error::PointNotOnSpace);
    }
    let seed_delta = linalg::rank(&super::values_at(family, seed)?, space.nvars());
    let seed_f = crate::to_f64_point(seed);
    let engines: Vec<FlowEngine> = family.iter().map(|d| FlowEngine::new(space, d)).collect();

    let mut points = vec![seed_f.clone()];
    let mut depths = vec![0];
    let mut grid = Grid { radius: params.dedup_radius, cells: HashMap::new() };
    grid.insert(&seed_f, 0);
    let mut frontier = vec![0usize];
    let mut drift_max: f64 = 0.0;
    let mut discarded = 0;
    let mut truncated = false;

    'levels: for level in 1..=params.depth {
        let results: Vec<Option<(Vec<f64>, f64)>> = frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let start = points[i].clone();
                engines.iter().flat_map(move |e| {
                    let start = start.clone();
                    params.time_grid.iter().map(move |&t| {
                        let r = e.run(&start, t, &params.flow);
                        r.status.is_completed().then(|| (r.endpoint().to_vec(), r.drift_max))
                    })
                })
            })
            .collect();
        let mut next = Vec::new();
        for r in results {
            let Some((p, drift)) = r else {
                discarded += 1;
                continue;
            };
            drift_max = drift_max.max(drift);
            if grid.near(&p, &points) {
                continue;
            }
            if points.len() >= params.max_points {
                truncated = true;
                break 'levels;
            }
            grid.insert(&p, points.len());
            next.push(points.len());
            points.push(p);
            depths.push(level);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let compiled: Vec<_> = family.iter().map(Derivation::compile).collect();
    let n = space.nvars();
    let ranks: Vec<usize> = points
        .par_iter()
        .map(|p| {
            let vals: Vec<Vec<f64>> = compiled.iter().map(|c| c.eval(p)).collect();
            linalg::numeric_rank(&vals, n, params.rank_tol)
        })
        .collect();
    let est_dim = ranks.iter().skip(1).copied().chain([seed_delta]).max().unwrap_or(0);
    let mut tangent_rank_along = ranks;
    tangent_rank_along[0] = seed_delta;
    Ok(OrbitApprox {
        seed: seed_f,
        points,
        depths,
        est_dim,
        seed_delta,
        tangent_rank_along,
        drift_max,
        discarded_flows: discarded,
        truncated,
    })
}
