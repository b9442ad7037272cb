//! Linear group actions on ℝⁿ: finite groups of rational orthogonal
//! matrices and torus actions by integer weights on coordinate 2-planes.

mod fm;
mod hilbert;
mod strata;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::Derivation;
use crate::linalg;
use crate::poly::{normal_form, Membership, Polynomial};
use crate::space::SpaceDef;
use crate::Rational;

use num_traits::{One, Zero};

pub use hilbert::{hilbert_embed, EmbeddingReport, HilbertMap, SeparationFailure};
pub use strata::{orbit_type_partition, OrbitTypeSet, Stratification, Stratum};

pub type Matrix = Vec<Vec<Rational>>;

/// Largest group order accepted by the closure computation.
pub const MAX_GROUP_ORDER: usize = 10_000;

/// A finite subgroup of `O(n)` with rational entries, stored as its full
/// element list (identity first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
}

impl FiniteGroup {
    /// Closes the generators under multiplication. Every generator must be
    /// exactly orthogonal.
    pub fn generate(n: usize, generators: Vec<Matrix>) -> Result<Self> {
        for g in &generators {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: g.len() });
            }
            if linalg::mat_mul(&linalg::transpose(g), g) != linalg::identity(n) {
                return Err(Error::Invalid("group generator is not orthogonal".into()));
            }
        }
        let id = linalg::identity(n);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id.clone(), 0)]);
        let mut queue = VecDeque::from([id]);
        while let Some(h) = queue.pop_front() {
            for g in &generators {
                let gh = linalg::mat_mul(g, &h);
                if !index.contains_key(&gh) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::GroupTooLarge(MAX_GROUP_ORDER));
                    }
                    index.insert(gh.clone(), elements.len());
                    elements.push(gh.clone());
                    queue.push_back(gh);
                }
            }
        }
        Ok(FiniteGroup { n, generators, elements, index })
    }

    /// `{±I}` acting on ℝⁿ.
    pub fn antipodal(n: usize) -> Self {
        let neg: Matrix = linalg::identity(n)
            .into_iter()
            .map(|r| r.into_iter().map(|v| -v).collect())
            .collect();
        Self::generate(n, vec![neg]).expect("orthogonal")
    }

    /// `ℤ₂ⁿ` generated by the coordinate sign flips.
    pub fn sign_flips(n: usize) -> Self {
        let gens = (0..n)
            .map(|i| {
                let mut m = linalg::identity(n);
                m[i][i] = -Rational::one();
                m
            })
            .collect();
        Self::generate(n, gens).expect("orthogonal")
    }

    pub fn trivial(n: usize) -> Self {
        Self::generate(n, vec![]).expect("identity")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn index_of(&self, g: &Matrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn act(&self, g: usize, x: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.elements[g], x)
    }

    /// `g⁻¹ = gᵀ` for orthogonal `g`.
    pub fn inverse(&self, g: usize) -> usize {
        self.index[&linalg::transpose(&self.elements[g])]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.index[&linalg::mat_mul(&self.elements[a], &self.elements[b])]
    }
}

/// Linear polynomials `(g x)ᵢ`, the substitution realising `p ↦ p ∘ g`.
pub fn linear_substitution(g: &Matrix) -> Vec<Polynomial> {
    g.iter().map(|row| Polynomial::linear(row)).collect()
}

/// Torus `T^r` acting by rotations on disjoint coordinate planes; plane `p`
/// turns with the integer weight vector `weights[p] ∈ ℤ^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusAction {
    n: usize,
    rank: usize,
    planes: Vec<(usize, usize)>,
    weights: Vec<Vec<i64>>,
}

impl TorusAction {
    pub fn new(n: usize, rank: usize, planes: Vec<(usize, usize)>, weights: Vec<Vec<i64>>) -> Result<Self> {
        if planes.len() != weights.len() {
            return Err(Error::Invalid("one weight vector per plane required".into()));
        }
        let mut used = vec![false; n];
        for &(a, b) in &planes {
            for c in [a, b] {
                if c >= n {
                    return Err(Error::DimensionMismatch { expected: n, got: c + 1 });
                }
                if used[c] {
                    return Err(Error::Invalid("torus planes must be disjoint".into()));
                }
                used[c] = true;
            }
        }
        if let Some(w) = weights.iter().find(|w| w.len() != rank) {
            return Err(Error::DimensionMismatch { expected: rank, got: w.len() });
        }
        Ok(TorusAction { n, rank, planes, weights })
    }

    /// Circle acting on ℝ² with weight `w`.
    pub fn circle(w: i64) -> Self {
        Self::new(2, 1, vec![(0, 1)], vec![vec![w]]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn planes(&self) -> &[(usize, usize)] {
        &self.planes
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// Coordinates not in any plane (fixed by the action).
    pub fn fixed_coordinates(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|c| !self.planes.iter().any(|&(a, b)| a == *c || b == *c))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAction {
    Finite(FiniteGroup),
    Torus(TorusAction),
}

/// Stabilizer of a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Stabilizer {
    /// Indices into the group's element list.
    Finite { elements: Vec<usize> },
    /// `{θ : ⟨w_p, θ⟩ ∈ ℤ for p ∈ planes}`, where `planes` are the planes on
    /// which the point is nonzero; `lattice` is the Hermite normal form of
    /// their weights.
    Torus { planes: Vec<usize>, lattice: Vec<Vec<i64>>, dim: usize, components: u64 },
}

impl Stabilizer {
    pub fn describe(&self) -> String {
        match self {
            Stabilizer::Finite { elements } => format!("order {}", elements.len()),
            Stabilizer::Torus { dim, components, .. } => {
                if *dim == 0 && *components == 1 {
                    "trivial".into()
                } else {
                    format!("dim {dim}, {components} component(s)")
                }
            }
        }
    }
}

impl GroupAction {
    pub fn dim(&self) -> usize {
        match self {
            GroupAction::Finite(g) => g.dim(),
            GroupAction::Torus(t) => t.dim(),
        }
    }

    /// One linear field per torus factor: weight `m` on plane `(x, y)`
    /// contributes `m(-y ∂x + x ∂y)`. Empty for finite groups.
    pub fn infinitesimal_generators(&self) -> Vec<Derivation> {
        let GroupAction::Torus(t) = self else { return Vec::new() };
        (0..t.rank)
            .map(|k| {
                t.planes.iter().zip(&t.weights).fold(Derivation::zero(t.n), |acc, (&(a, b), w)| {
                    if w[k] == 0 {
                        acc
                    } else {
                        acc.add(&Derivation::rotation(t.n, a, b).scale(&Rational::from_integer(w[k].into())))
                    }
                })
            })
            .collect()
    }

    pub fn stabilizer(&self, x: &[Rational]) -> Result<Stabilizer> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(match self {
            GroupAction::Finite(g) => Stabilizer::Finite {
                elements: (0..g.order()).filter(|&i| g.act(i, x) == x).collect(),
            },
            GroupAction::Torus(t) => {
                let planes: Vec<usize> = (0..t.planes.len())
                    .filter(|&p| {
                        let (a, b) = t.planes[p];
                        !x[a].is_zero() || !x[b].is_zero()
                    })
                    .collect();
                torus_stabilizer(t, planes)
            }
        })
    }

    /// Per-generator invariance verdicts: `p ∘ g = p` for finite generators,
    /// `ξ(p) = 0` for torus generators. Says nothing about whether `gens`
    /// generate the invariant ring.
    pub fn verify_invariant_gens(&self, gens: &[Polynomial]) -> Vec<bool> {
        gens.iter().map(|p| self.is_invariant_poly(p)).collect()
    }

    pub fn is_invariant_poly(&self, p: &Polynomial) -> bool {
        assert_eq!(p.nvars(), self.dim(), "polynomial and action dimensions differ");
        match self {
            GroupAction::Finite(g) => g
                .generators()
                .iter()
                .all(|m| &p.compose(&linear_substitution(m)).expect("arity") == p),
            GroupAction::Torus(_) => {
                self.infinitesimal_generators().iter().all(|x| x.apply(p).is_zero())
            }
        }
    }

    /// Checks that the space is invariant: each equation maps into the
    /// equation ideal and each inequality polynomial is invariant.
    pub fn check_space_invariant(&self, space: &SpaceDef) -> Result<()> {
        if space.nvars() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: space.nvars() });
        }
        let eqs = space.equations();
        let images: Vec<(String, Polynomial)> = match self {
            GroupAction::Finite(g) => g
                .generators()
                .iter()
                .flat_map(|m| {
                    let sub = linear_substitution(m);
                    eqs.iter().map(move |f| (f.to_string(), f.compose(&sub).expect("arity")))
                })
                .collect(),
            GroupAction::Torus(_) => self
                .infinitesimal_generators()
                .iter()
                .flat_map(|x| eqs.iter().map(move |f| (f.to_string(), x.apply(f))))
                .collect(),
        };
        for (name, img) in images {
            let nf = normal_form(&img, eqs)?;
            if nf.membership != Membership::Member {
                return Err(Error::NotInvariant(format!(
                    "image of equation {} does not reduce to zero",
                    name
                )));
            }
        }
        let all_ineqs = space
            .inequalities()
            .iter()
            .chain(space.pieces().iter().flat_map(|p| &p.inequalities));
        for i in all_ineqs {
            if !self.is_invariant_poly(&i.poly) {
                return Err(Error::NotInvariant(format!(
                    "inequality {} is not invariant",
                    i.to_string_with(space.var_names())
                )));
            }
        }
        for p in space.pieces() {
            for e in &p.equations {
                if !self.is_invariant_poly(e) {
                    return Err(Error::NotInvariant("piece equation is not invariant".into()));
                }
            }
        }
        Ok(())
    }

    /// Reynolds average `(1/|G|) Σ p ∘ g` for finite groups.
    pub fn reynolds(&self, p: &Polynomial) -> Option<Polynomial> {
        let GroupAction::Finite(g) = self else { return None };
        let sum = g.elements().iter().fold(Polynomial::zero(p.nvars()), |acc, m| {
            &acc + &p.compose(&linear_substitution(m)).expect("arity")
        });
        Some(sum.scale(&Rational::new(1.into(), (g.order() as i64).into())))
    }
}

pub(crate) fn torus_stabilizer(t: &TorusAction, planes: Vec<usize>) -> Stabilizer {
    let rows: Vec<Vec<i64>> = planes.iter().map(|&p| t.weights[p].clone()).collect();
    let lattice = if rows.is_empty() { Vec::new() } else { linalg::hermite_normal_form(&rows) };
    let dim = t.rank - lattice.len();
    let components = if rows.is_empty() { 1 } else { linalg::torsion_order(&rows) };
    Stabilizer::Torus { planes, lattice, dim, components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoint;

    #[test]
    fn closures() {
        assert_eq!(FiniteGroup::antipodal(2).order(), 2);
        assert_eq!(FiniteGroup::sign_flips(3).order(), 8);
        assert_eq!(FiniteGroup::trivial(2).order(), 1);
        let bad = vec![vec![crate::q(2), crate::q(0)], vec![crate::q(0), crate::q(1)]];
        assert!(FiniteGroup::generate(2, vec![bad]).is_err());
        // rotation by a quarter turn generates ℤ₄
        let r = vec![vec![crate::q(0), crate::q(-1)], vec![crate::q(1), crate::q(0)]];
        assert_eq!(FiniteGroup::generate(2, vec![r]).unwrap().order(), 4);
    }

    #[test]
    fn stabilizers() {
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        assert_eq!(z2.stabilizer(&qpoint(&[0, 0])).unwrap(), Stabilizer::Finite { elements: vec![0, 1] });
        assert_eq!(z2.stabilizer(&qpoint(&[1, 0])).unwrap(), Stabilizer::Finite { elements: vec![0] });
        let flips = FiniteGroup::sign_flips(2);
        let a = GroupAction::Finite(flips.clone());
        let Stabilizer::Finite { elements } = a.stabilizer(&qpoint(&[0, 3])).unwrap() else { panic!() };
        let mats: Vec<&Matrix> = elements.iter().map(|&i| &flips.elements()[i]).collect();
        let mut flip_x = linalg::identity(2);
        flip_x[0][0] = -Rational::one();
        assert_eq!(mats, vec![&linalg::identity(2), &flip_x]);
    }

    #[test]
    fn torus_stabilizers() {
        let t = GroupAction::Torus(TorusAction::circle(2));
        match t.stabilizer(&qpoint(&[1, 0])).unwrap() {
            Stabilizer::Torus { dim, components, .. } => assert_eq!((dim, components), (0, 2)),
            _ => panic!(),
        }
        match t.stabilizer(&qpoint(&[0, 0])).unwrap() {
            Stabilizer::Torus { dim, components, .. } => assert_eq!((dim, components), (1, 1)),
            _ => panic!(),
        }
    }

    #[test]
    fn generators_of_circle_actions() {
        let names: Vec<String> = ["x1", "y1", "x2", "y2"].iter().map(|s| s.to_string()).collect();
        let t = GroupAction::Torus(TorusAction::new(4, 1, vec![(0, 1), (2, 3)], vec![vec![1], vec![-1]]).unwrap());
        let g = t.infinitesimal_generators();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].to_string_with(&names), "-y1*d_x1 + x1*d_y1 + y2*d_x2 - x2*d_y2");
        let c = GroupAction::Torus(TorusAction::circle(1)).infinitesimal_generators();
        assert_eq!(c, vec![Derivation::rotation(2, 0, 1)]);
        assert!(GroupAction::Finite(FiniteGroup::antipodal(2)).infinitesimal_generators().is_empty());
    }

    #[test]
    fn invariant_generators() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let p = |s: &str| Polynomial::parse(s, &v).unwrap();
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        assert_eq!(z2.verify_invariant_gens(&[p("x^2 - y^2"), p("2*x*y"), p("x^2 + y^2")]), vec![true; 3]);
        assert_eq!(z2.verify_invariant_gens(&[p("x")]), vec![false]);
        let flips = GroupAction::Finite(FiniteGroup::sign_flips(2));
        assert_eq!(flips.verify_invariant_gens(&[p("x^2"), p("y^2"), p("x*y")]), vec![true, true, false]);
        assert_eq!(z2.reynolds(&p("x^3 + x*y + 1")).unwrap(), p("x*y + 1"));
    }

    #[test]
    fn space_invariance() {
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let circle = SpaceDef::parse(&["x", "y"], &["x^2 + y^2 - 1"], &[]).unwrap();
        assert!(z2.check_space_invariant(&circle).is_ok());
        let half = SpaceDef::parse(&["x", "y"], &[], &["x >= 0"]).unwrap();
        assert!(matches!(z2.check_space_invariant(&half), Err(Error::NotInvariant(_))));
        let line = SpaceDef::parse(&["x", "y"], &["x - 1"], &[]).unwrap();
        assert!(matches!(z2.check_space_invariant(&line), Err(Error::NotInvariant(_))));
    }
}
