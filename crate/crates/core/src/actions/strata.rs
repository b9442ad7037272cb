//! Orbit-type partitions of linear actions.
//!
//! For a finite group every isotropy subgroup `H` has a fixed subspace
//! `V = Fix(H)`, and `{x : Stab(x) = H}` is `V` minus the proper subspaces
//! `V ∩ Fix(g)`, `g ∉ H`. Hyperplanes among these cut `V` into open chambers
//! (enumerated by sign vectors); higher-codimension pieces do not
//! disconnect. For a torus the stabilizer only depends on which weight
//! planes a point meets, so the pieces are products of punctured planes.
//!
//! When the space carries equations or inequalities, each linear cell is
//! intersected with it numerically (random points projected onto the
//! equations) and components are not enumerated.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fm::strict_cone_witness;
use super::{torus_stabilizer, GroupAction, Stabilizer, TorusAction};
use crate::error::{Error, Result};
use crate::fields::Provenance;
use crate::linalg;
use crate::poly::{self, format_rational, Polynomial};
use crate::space::{Projector, SpaceDef};
use crate::Rational;

use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTypeSet {
    pub label: String,
    pub stabilizer: String,
    /// Number of distinct (conjugate) isotropy subgroups in the class.
    pub conjugates: usize,
    pub dim: usize,
    pub strata: Vec<usize>,
    pub components_enumerated: bool,
    pub principal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum {
    pub label: String,
    pub orbit_type: usize,
    pub dim: usize,
    /// Defining conditions, one string per cell.
    pub description: Vec<String>,
    pub sample: Vec<f64>,
    pub exact_sample: Option<Vec<String>>,
    pub provenance: Provenance,
    #[serde(skip)]
    cells: Vec<Cell>,
    #[serde(skip)]
    exact: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratification {
    pub orbit_types: Vec<OrbitTypeSet>,
    pub strata: Vec<Stratum>,
    /// Pairs `(a, b)`: stratum `a` lies in the closure of stratum `b`.
    pub order: Vec<(usize, usize)>,
    pub principal: usize,
    pub notes: Vec<String>,
}

/// `{x ∈ span(basis) : signs hold, x ∉ removed}` intersected with the space.
#[derive(Debug, Clone, PartialEq)]
struct Cell {
    n: usize,
    basis: Vec<Vec<Rational>>,
    /// Ambient functionals with required sign (`true` for `> 0`).
    signs: Vec<(Vec<Rational>, bool)>,
    /// Each removed subspace as equation rows (relative to the cell span).
    removed: Vec<Vec<Vec<Rational>>>,
}

impl Cell {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn point(&self, c: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (cj, b) in c.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += cj * bi;
            }
        }
        x
    }

    fn contains(&self, x: &[Rational]) -> bool {
        if !linalg::in_span(&self.basis, x) && !(self.basis.is_empty() && x.iter().all(Zero::is_zero)) {
            return false;
        }
        let dot = |r: &[Rational]| r.iter().zip(x).map(|(a, b)| a * b).sum::<Rational>();
        self.signs.iter().all(|(r, pos)| if *pos { dot(r).is_positive() } else { dot(r).is_negative() })
            && self.removed.iter().all(|w| w.iter().any(|r| !dot(r).is_zero()))
    }

    fn in_closure(&self, x: &[f64], tol: f64) -> bool {
        let bf: Vec<Vec<f64>> = self.basis.iter().map(|b| crate::to_f64_point(b)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if bf.is_empty() {
            return norm <= tol;
        }
        if linalg::span_residual(&bf, x) > tol * norm.max(1.0) {
            return false;
        }
        self.signs.iter().all(|(r, pos)| {
            let d: f64 = crate::to_f64_point(r).iter().zip(x).map(|(a, b)| a * b).sum();
            if *pos { d >= -tol } else { d <= tol }
        })
    }

    fn describe(&self, names: &[String]) -> String {
        let n = names.len();
        let mut parts = Vec::new();
        let eqs = if self.basis.is_empty() { linalg::identity(n) } else { linalg::kernel(&self.basis, n) };
        for e in &eqs {
            parts.push(format!("{} = 0", Polynomial::linear(e).to_string_with(names)));
        }
        for (r, pos) in &self.signs {
            parts.push(format!("{} {} 0", Polynomial::linear(r).to_string_with(names), if *pos { ">" } else { "<" }));
        }
        for w in &self.removed {
            // a strict sign on a functional vanishing on w already excludes it
            if self.signs.iter().any(|(r, _)| linalg::in_span(w, r)) {
                continue;
            }
            let sub = linalg::kernel(w, n);
            let rows = if sub.is_empty() { linalg::identity(n) } else { linalg::kernel(&sub, n) };
            let conds: Vec<String> =
                rows.iter().map(|r| format!("{} = 0", Polynomial::linear(r).to_string_with(names))).collect();
            parts.push(format!("not ({})", conds.join(", ")));
        }
        if parts.is_empty() {
            "everything".into()
        } else {
            parts.join(", ")
        }
    }

    /// Exact interior point avoiding the removed subspaces.
    fn exact_sample(&self) -> Option<Vec<Rational>> {
        let d = self.dim();
        let rows: Vec<Vec<Rational>> = self
            .signs
            .iter()
            .map(|(r, pos)| {
                let f: Vec<Rational> = self.basis.iter().map(|b| dot(r, b)).collect();
                if *pos { f } else { f.into_iter().map(|v| -v).collect() }
            })
            .collect();
        let base = strict_cone_witness(&rows, d)?;
        // perturb off the removed subspaces, staying inside the open cone
        for k in 0..(4 * d + 8) {
            let c: Vec<Rational> = base
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let shift = crate::qf(((j * 7 + k * 3) % 11) as i64 + 1, ((k + 2) * 13) as i64);
                    let s = if k == 0 { Rational::zero() } else { shift };
                    v + s
                })
                .collect();
            let x = self.point(&c);
            if self.contains(&x) {
                return Some(x);
            }
        }
        None
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Computes the orbit-type partition of an invariant space.
pub fn orbit_type_partition(action: &GroupAction, space: &SpaceDef) -> Result<Stratification> {
    action.check_space_invariant(space)?;
    let (classes, mut notes) = match action {
        GroupAction::Finite(g) => finite_classes(g)?,
        GroupAction::Torus(t) => torus_classes(t)?,
    };
    let euclidean = space.equations().is_empty()
        && space.inequalities().is_empty()
        && space.pieces().is_empty();
    if !euclidean {
        notes.push("cells intersected with the space numerically; components not enumerated".into());
    }
    notes.push("minimality of the stratification is not checked".into());

    let names = space.var_names();
    let mut orbit_types = Vec::new();
    let mut strata: Vec<Stratum> = Vec::new();
    for class in classes {
        let ot = orbit_types.len();
        let mut idxs = Vec::new();
        for comp in class.components {
            let stratum = if euclidean {
                exact_stratum(comp, ot, names)
            } else {
                numeric_stratum(comp, ot, space)?
            };
            if let Some(s) = stratum {
                idxs.push(strata.len());
                strata.push(s);
            }
        }
        if idxs.is_empty() {
            continue;
        }
        let dim = idxs.iter().map(|&i| strata[i].dim).max().unwrap_or(0);
        orbit_types.push(OrbitTypeSet {
            label: String::new(),
            stabilizer: class.stabilizer,
            conjugates: class.conjugates,
            dim,
            strata: idxs,
            components_enumerated: euclidean,
            principal: false,
        });
    }
    if orbit_types.is_empty() {
        return Err(Error::Invalid("no orbit-type set meets the space".into()));
    }

    // principal: largest dimension, ties broken by smallest stabilizer
    let sizes: Vec<usize> = orbit_types.iter().map(|o| o.dim).collect();
    let max_dim = *sizes.iter().max().expect("nonempty");
    let principal = (0..orbit_types.len())
        .rev()
        .find(|&i| orbit_types[i].dim == max_dim)
        .expect("nonempty");
    orbit_types[principal].principal = true;
    for (k, o) in orbit_types.iter_mut().enumerate() {
        o.label = format!("M{}", k + 1);
    }
    for (k, s) in strata.iter_mut().enumerate() {
        s.label = format!("S{}", k + 1);
    }

    let mut order = Vec::new();
    for a in 0..strata.len() {
        for b in 0..strata.len() {
            if a == b || strata[a].dim >= strata[b].dim {
                continue;
            }
            if strata[b].cells.iter().any(|c| c.in_closure(&strata[a].sample, 1e-9)) {
                order.push((a, b));
            }
        }
    }
    Ok(Stratification { orbit_types, strata, order, principal, notes })
}

impl Stratification {
    /// The stratum containing an exact point of the space.
    pub fn locate(&self, space: &SpaceDef, x: &[Rational]) -> Result<Option<usize>> {
        if !space.contains(x)? {
            return Err(Error::PointNotOnSpace);
        }
        Ok(self.strata.iter().position(|s| s.cells.iter().any(|c| c.contains(x))))
    }

    pub fn principal_set(&self) -> &OrbitTypeSet {
        &self.orbit_types[self.principal]
    }

    /// Exact sample point of a stratum (linear case only).
    pub fn exact_sample(&self, stratum: usize) -> Option<&[Rational]> {
        self.strata[stratum].exact.as_deref()
    }
}

struct Class {
    stabilizer: String,
    conjugates: usize,
    size: usize,
    /// Each component is a list of cells whose union is connected.
    components: Vec<Vec<Cell>>,
}

fn exact_stratum(cells: Vec<Cell>, ot: usize, names: &[String]) -> Option<Stratum> {
    let main = cells.iter().max_by_key(|c| c.dim())?.clone();
    let x = main.exact_sample()?;
    Some(Stratum {
        label: String::new(),
        orbit_type: ot,
        dim: main.dim(),
        description: cells.iter().map(|c| c.describe(names)).collect(),
        sample: crate::to_f64_point(&x),
        exact_sample: Some(x.iter().map(format_rational).collect()),
        provenance: Provenance::Symbolic,
        cells,
        exact: Some(x),
    })
}

fn numeric_stratum(cells: Vec<Cell>, ot: usize, space: &SpaceDef) -> Result<Option<Stratum>> {
    let mut best: Option<(usize, Vec<f64>)> = None;
    let mut kept = Vec::new();
    for (k, cell) in cells.iter().enumerate() {
        if let Some((dim, x)) = sample_cell_numeric(cell, space, 0x57a + k as u64)? {
            kept.push(cell.clone());
            if best.as_ref().is_none_or(|(d, _)| dim > *d) {
                best = Some((dim, x));
            }
        }
    }
    let Some((dim, sample)) = best else { return Ok(None) };
    Ok(Some(Stratum {
        label: String::new(),
        orbit_type: ot,
        dim,
        description: kept.iter().map(|c| c.describe(space.var_names())).collect(),
        sample,
        exact_sample: None,
        provenance: Provenance::Numeric,
        cells: kept,
        exact: None,
    }))
}

/// Random cell points projected onto the space equations (in cell
/// coordinates). Returns the local dimension and a point, or `None` when
/// no point is found.
fn sample_cell_numeric(cell: &Cell, space: &SpaceDef, seed: u64) -> Result<Option<(usize, Vec<f64>)>> {
    let n = space.nvars();
    let d = cell.dim();
    let param: Vec<Polynomial> = (0..n)
        .map(|i| {
            let coeffs: Vec<Rational> = cell.basis.iter().map(|b| b[i].clone()).collect();
            if d == 0 { Polynomial::zero(0) } else { Polynomial::linear(&coeffs) }
        })
        .collect();
    let eqs: Vec<Polynomial> = if d == 0 {
        Vec::new()
    } else {
        space.equations().iter().map(|f| f.compose(&param)).collect::<Result<_>>()?
    };
    if d == 0 {
        let origin = vec![Rational::zero(); n];
        return Ok(space.contains(&origin)?.then(|| (0, vec![0.0; n])));
    }
    let proj = Projector::from_equations(&eqs, d);
    let bf: Vec<Vec<f64>> = cell.basis.iter().map(|b| crate::to_f64_point(b)).collect();
    let signs: Vec<(Vec<f64>, bool)> =
        cell.signs.iter().map(|(r, p)| (crate::to_f64_point(r), *p)).collect();
    let removed: Vec<Vec<Vec<f64>>> =
        cell.removed.iter().map(|w| w.iter().map(|r| crate::to_f64_point(r)).collect()).collect();
    let jac = poly::jacobian(&eqs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<f64>)> = None;
    for _ in 0..200 {
        let c0: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let c = proj.project(&c0, 60, 1e-13);
        if proj.residual(&c) > 1e-10 {
            continue;
        }
        let x: Vec<f64> = (0..n).map(|i| bf.iter().zip(&c).map(|(b, cj)| b[i] * cj).sum()).collect();
        let norm = x.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let fdot = |r: &[f64]| r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        let margin = 1e-6 * norm;
        let ok = signs.iter().all(|(r, p)| if *p { fdot(r) > margin } else { fdot(r) < -margin })
            && removed.iter().all(|w| w.iter().any(|r| fdot(r).abs() > margin))
            && space.contains_f64(&x, 1e-9)?;
        if !ok {
            continue;
        }
        let j = poly::eval_matrix_f64(&jac, &c)?;
        let dim = d - linalg::numeric_rank(&j, d, 1e-9);
        if best.as_ref().is_none_or(|(bd, _)| dim > *bd) {
            best = Some((dim, x));
        }
    }
    Ok(best)
}

fn finite_classes(g: &super::FiniteGroup) -> Result<(Vec<Class>, Vec<String>)> {
    let n = g.dim();
    let id = linalg::identity(n);
    let minus_id: Vec<Vec<Vec<Rational>>> = g
        .elements()
        .iter()
        .map(|m| m.iter().zip(&id).map(|(r, e)| r.iter().zip(e).map(|(a, b)| a - b).collect()).collect())
        .collect();
    let fixes = |k: usize, v: &[Rational]| minus_id[k].iter().all(|r| dot(r, v).is_zero());
    let isotropy_of = |basis: &[Vec<Rational>]| -> Vec<usize> {
        (0..g.order()).filter(|&k| basis.iter().all(|b| fixes(k, b))).collect()
    };
    let fix_of = |h: &[usize]| -> Vec<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = h.iter().flat_map(|&k| minus_id[k].clone()).collect();
        if rows.is_empty() { linalg::identity(n) } else { linalg::kernel(&rows, n) }
    };

    // isotropy subgroups and their fixed spaces, by closure under
    // intersecting with further fixed spaces
    let start_basis = fix_of(&[0]);
    let mut subgroups: BTreeMap<Vec<usize>, Vec<Vec<Rational>>> = BTreeMap::new();
    let mut queue = vec![(isotropy_of(&start_basis), start_basis)];
    while let Some((h, v)) = queue.pop() {
        if subgroups.contains_key(&h) {
            continue;
        }
        for k in 0..g.order() {
            if h.contains(&k) {
                continue;
            }
            let mut hk = h.clone();
            hk.push(k);
            let v2 = fix_of(&hk);
            let h2 = isotropy_of(&v2);
            if !subgroups.contains_key(&h2) {
                queue.push((h2, v2));
            }
        }
        subgroups.insert(h, v);
    }

    // cells of each isotropy subgroup
    let mut notes = Vec::new();
    let mut cells_of: BTreeMap<Vec<usize>, Vec<Cell>> = BTreeMap::new();
    for (h, v) in &subgroups {
        let d = v.len();
        let mut hyper: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new(); // (restricted, ambient)
        let mut removed: Vec<Vec<Vec<Rational>>> = Vec::new();
        for k in (0..g.order()).filter(|k| !h.contains(k)) {
            let restricted: Vec<Vec<Rational>> =
                minus_id[k].iter().map(|r| v.iter().map(|b| dot(r, b)).collect()).collect();
            let rk = linalg::rank(&restricted, d);
            if rk == 1 {
                let (row, amb) = restricted
                    .iter()
                    .zip(&minus_id[k])
                    .find(|(r, _)| r.iter().any(|c| !c.is_zero()))
                    .expect("rank one");
                let prim = linalg::primitive_integer_vector(row.clone());
                // rescale the ambient functional consistently with prim
                let scale = &prim.iter().zip(row).find(|(_, r)| !r.is_zero()).map(|(p, r)| p / r).expect("nonzero");
                let amb: Vec<Rational> = amb.iter().map(|a| a * scale).collect();
                if !hyper.iter().any(|(p, _)| p == &prim) {
                    hyper.push((prim, amb));
                }
            } else if rk > 1 && !removed.contains(&minus_id[k]) {
                removed.push(minus_id[k].clone());
            }
        }
        if hyper.len() > 12 {
            return Err(Error::Invalid("too many hyperplanes to enumerate chambers".into()));
        }
        let mut cells = Vec::new();
        for mask in 0..(1u32 << hyper.len()) {
            let signs: Vec<(Vec<Rational>, bool)> = hyper
                .iter()
                .enumerate()
                .map(|(i, (_, amb))| (amb.clone(), mask & (1 << i) == 0))
                .collect();
            let rows: Vec<Vec<Rational>> = hyper
                .iter()
                .enumerate()
                .map(|(i, (p, _))| if mask & (1 << i) == 0 { p.clone() } else { p.iter().map(|c| -c).collect() })
                .collect();
            if strict_cone_witness(&rows, d).is_some() {
                cells.push(Cell { n, basis: v.clone(), signs, removed: removed.clone() });
            }
        }
        cells_of.insert(h.clone(), cells);
    }

    // conjugacy classes of isotropy subgroups
    let keys: Vec<Vec<usize>> = subgroups.keys().cloned().collect();
    let mut class_of: Vec<Option<usize>> = vec![None; keys.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..keys.len() {
        if class_of[i].is_some() {
            continue;
        }
        let c = classes.len();
        classes.push(vec![i]);
        class_of[i] = Some(c);
        for x in 0..g.order() {
            let xi = g.inverse(x);
            let mut conj: Vec<usize> = keys[i].iter().map(|&h| g.multiply(g.multiply(x, h), xi)).collect();
            conj.sort_unstable();
            if let Some(j) = keys.iter().position(|k| k == &conj) {
                if class_of[j].is_none() {
                    class_of[j] = Some(c);
                    classes[c].push(j);
                }
            }
        }
    }
    let mut out: Vec<Class> = classes
        .into_iter()
        .map(|members| {
            let order = keys[members[0]].len();
            let components = members
                .iter()
                .flat_map(|&m| cells_of[&keys[m]].iter().cloned().map(|c| vec![c]))
                .collect();
            Class {
                stabilizer: format!("order {order}"),
                conjugates: members.len(),
                size: order,
                components,
            }
        })
        .collect();
    // smallest fixed spaces first
    out.sort_by_key(|c| (c.components.first().map_or(0, |cells| cells[0].dim()), std::cmp::Reverse(c.size)));
    if g.order() == 1 {
        notes.push("trivial group".into());
    }
    Ok((out, notes))
}

fn torus_classes(t: &TorusAction) -> Result<(Vec<Class>, Vec<String>)> {
    let n = t.dim();
    let m = t.planes().len();
    if m > 12 {
        return Err(Error::Invalid("too many weight planes".into()));
    }
    let unit = |i: usize| {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        e
    };
    let fixed = t.fixed_coordinates();
    let mut by_lattice: BTreeMap<Vec<Vec<i64>>, (Stabilizer, Vec<u32>)> = BTreeMap::new();
    for mask in 0..(1u32 << m) {
        let planes: Vec<usize> = (0..m).filter(|p| mask & (1 << p) != 0).collect();
        let stab = torus_stabilizer(t, planes);
        let Stabilizer::Torus { lattice, .. } = &stab else { unreachable!() };
        by_lattice.entry(lattice.clone()).or_insert_with(|| (stab.clone(), Vec::new())).1.push(mask);
    }
    let cell_of = |mask: u32| {
        let mut basis = Vec::new();
        let mut removed = Vec::new();
        for (p, &(a, b)) in t.planes().iter().enumerate() {
            if mask & (1 << p) != 0 {
                basis.push(unit(a));
                basis.push(unit(b));
                removed.push(vec![unit(a), unit(b)]);
            }
        }
        basis.extend(fixed.iter().map(|&c| unit(c)));
        basis.sort_by(|x, y| y.cmp(x));
        Cell { n, basis, signs: Vec::new(), removed }
    };
    let mut out = Vec::new();
    for (_, (stab, masks)) in by_lattice {
        // connected components of the inclusion graph among pieces
        let mut comp: Vec<usize> = (0..masks.len()).collect();
        fn find(c: &mut Vec<usize>, i: usize) -> usize {
            if c[i] != i {
                let r = find(c, c[i]);
                c[i] = r;
            }
            c[i]
        }
        for i in 0..masks.len() {
            for j in 0..masks.len() {
                if masks[i] & masks[j] == masks[i] {
                    let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                    comp[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
        for i in 0..masks.len() {
            let r = find(&mut comp, i);
            groups.entry(r).or_default().push(cell_of(masks[i]));
        }
        let Stabilizer::Torus { dim, components, .. } = stab else { unreachable!() };
        out.push(Class {
            stabilizer: stab_description(dim, components),
            conjugates: 1,
            size: 0,
            components: groups.into_values().collect(),
        });
    }
    out.sort_by_key(|c| c.components.iter().flatten().map(Cell::dim).max().unwrap_or(0));
    Ok((out, Vec::new()))
}

fn stab_description(dim: usize, components: u64) -> String {
    Stabilizer::Torus { planes: vec![], lattice: vec![], dim, components }.describe()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::FiniteGroup;
    use crate::{qf, qpoint};

    fn plane() -> SpaceDef {
        SpaceDef::euclidean(vec!["x".into(), "y".into()])
    }

    #[test]
    fn antipodal_partition() {
        let s = orbit_type_partition(&GroupAction::Finite(FiniteGroup::antipodal(2)), &plane()).unwrap();
        let dims: Vec<(usize, usize)> = s.orbit_types.iter().map(|o| (o.dim, o.strata.len())).collect();
        assert_eq!(dims, vec![(0, 1), (2, 1)]);
        assert!(s.principal_set().principal);
        assert_eq!(s.principal_set().dim, 2);
        assert_eq!(s.order, vec![(0, 1)]);
        assert_eq!(s.locate(&plane(), &qpoint(&[0, 0])).unwrap(), Some(0));
        assert_eq!(s.locate(&plane(), &qpoint(&[3, -1])).unwrap(), Some(1));
    }

    #[test]
    fn sign_flip_partition() {
        let s = orbit_type_partition(&GroupAction::Finite(FiniteGroup::sign_flips(2)), &plane()).unwrap();
        let dims: Vec<(usize, usize, String)> =
            s.orbit_types.iter().map(|o| (o.dim, o.strata.len(), o.stabilizer.clone())).collect();
        assert_eq!(
            dims,
            vec![
                (0, 1, "order 4".to_string()),
                (1, 2, "order 2".to_string()),
                (1, 2, "order 2".to_string()),
                (2, 4, "order 1".to_string())
            ]
        );
        // every sampled point lies in exactly one stratum
        for x in -3..=3 {
            for y in -3..=3 {
                let p = vec![qf(x, 2), qf(y, 3)];
                let hits = s.strata.iter().filter(|st| st.cells.iter().any(|c| c.contains(&p))).count();
                assert_eq!(hits, 1, "{p:?}");
            }
        }
    }

    #[test]
    fn circle_partition() {
        let s = orbit_type_partition(&GroupAction::Torus(TorusAction::circle(1)), &plane()).unwrap();
        let dims: Vec<usize> = s.orbit_types.iter().map(|o| o.dim).collect();
        assert_eq!(dims, vec![0, 2]);
        assert_eq!(s.orbit_types[0].stabilizer, "dim 1, 1 component(s)");
        assert_eq!(s.orbit_types[1].stabilizer, "trivial");
    }

    #[test]
    fn weight_cone_partition() {
        let t = TorusAction::new(4, 1, vec![(0, 1), (2, 3)], vec![vec![1], vec![-1]]).unwrap();
        let z = SpaceDef::parse(&["x1", "y1", "x2", "y2"], &["x1^2 + y1^2 - x2^2 - y2^2"], &[]).unwrap();
        let s = orbit_type_partition(&GroupAction::Torus(t.clone()), &z).unwrap();
        let dims: Vec<usize> = s.strata.iter().map(|st| st.dim).collect();
        assert_eq!(dims, vec![0, 3]);
        assert!(!s.orbit_types[0].components_enumerated);
        // on all of ℝ⁴ the two punctured planes appear as well
        let r4 = SpaceDef::euclidean(z.var_names().to_vec());
        let s = orbit_type_partition(&GroupAction::Torus(t), &r4).unwrap();
        let dims: Vec<usize> = s.strata.iter().map(|st| st.dim).collect();
        assert_eq!(dims, vec![0, 4]);
        assert_eq!(s.strata[1].description.len(), 3);
    }

    #[test]
    fn non_invariant_space_rejected() {
        let half = SpaceDef::parse(&["x", "y"], &[], &["x >= 0"]).unwrap();
        let r = orbit_type_partition(&GroupAction::Finite(FiniteGroup::antipodal(2)), &half);
        assert!(matches!(r, Err(Error::NotInvariant(_))));
    }
}
