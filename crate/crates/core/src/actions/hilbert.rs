//! Hilbert maps: invariant polynomials embedding an orbit space into
//! Euclidean space.

use serde::Serialize;

use super::GroupAction;
use crate::error::{Error, Result};
use crate::poly::{format_rational, Polynomial};
use crate::space::{Inequality, SpaceDef};
use crate::Rational;

/// Invariant polynomials `p₁, …, p_k` together with the relations and
/// inequalities cutting out their image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertMap {
    pub generators: Vec<Polynomial>,
    pub target_names: Vec<String>,
    pub relations: Vec<Polynomial>,
    pub inequalities: Vec<Inequality>,
}

impl HilbertMap {
    pub fn new(
        generators: Vec<Polynomial>,
        target_names: Vec<String>,
        relations: Vec<Polynomial>,
        inequalities: Vec<Inequality>,
    ) -> Result<Self> {
        let k = generators.len();
        if target_names.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: target_names.len() });
        }
        if let Some(g) = generators.iter().find(|g| g.nvars() != generators[0].nvars()) {
            return Err(Error::DimensionMismatch { expected: generators[0].nvars(), got: g.nvars() });
        }
        for p in relations.iter().chain(inequalities.iter().map(|i| &i.poly)) {
            if p.nvars() != k {
                return Err(Error::DimensionMismatch { expected: k, got: p.nvars() });
            }
        }
        Ok(HilbertMap { generators, target_names, relations, inequalities })
    }

    pub fn source_dim(&self) -> usize {
        self.generators.first().map_or(0, Polynomial::nvars)
    }

    pub fn target_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn image(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.generators.iter().map(|g| g.eval(x)).collect()
    }

    /// The image set as a space in the target variables.
    pub fn image_space(&self) -> Result<SpaceDef> {
        SpaceDef::new(self.target_names.clone(), self.relations.clone(), self.inequalities.clone())
    }

    /// `r(p₁, …, p_k)` for each relation; all zero when the relations hold.
    pub fn composed_relations(&self) -> Result<Vec<Polynomial>> {
        self.relations.iter().map(|r| r.compose(&self.generators)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationFailure {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub same_image: bool,
    pub same_orbit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub generators_invariant: Vec<bool>,
    /// Whether each relation composes to the zero polynomial.
    pub relations_vanish: Vec<bool>,
    pub images: Vec<Vec<String>>,
    /// Whether every image satisfies the relations exactly.
    pub images_on_relations: bool,
    pub images_satisfy_inequalities: bool,
    pub separation_checked: bool,
    pub pairs_checked: usize,
    pub separation_failures: Vec<SeparationFailure>,
    pub notes: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.generators_invariant.iter().all(|&b| b)
            && self.relations_vanish.iter().all(|&b| b)
            && self.images_on_relations
            && self.images_satisfy_inequalities
            && self.separation_failures.is_empty()
    }
}

/// Maps samples through the Hilbert map and checks the relations, the
/// inequalities and, for finite groups, that fibres are exactly orbits.
///
/// The sample set is augmented with group images of each sample so that
/// the "same orbit ⇒ same image" direction is exercised.
pub fn hilbert_embed(action: &GroupAction, hm: &HilbertMap, samples: &[Vec<Rational>]) -> Result<EmbeddingReport> {
    if hm.source_dim() != action.dim() {
        return Err(Error::DimensionMismatch { expected: action.dim(), got: hm.source_dim() });
    }
    let generators_invariant = action.verify_invariant_gens(&hm.generators);
    if let Some(k) = generators_invariant.iter().position(|&b| !b) {
        return Err(Error::NotInvariant(format!("generator {} is not invariant", hm.generators[k])));
    }
    let relations_vanish: Vec<bool> = hm.composed_relations()?.iter().map(Polynomial::is_zero).collect();

    let mut points: Vec<Vec<Rational>> = Vec::new();
    for s in samples {
        if s.len() != action.dim() {
            return Err(Error::DimensionMismatch { expected: action.dim(), got: s.len() });
        }
        points.push(s.clone());
        if let GroupAction::Finite(g) = action {
            // one nontrivial translate per sample keeps the pair count linear
            if g.order() > 1 {
                let k = 1 + points.len() % (g.order() - 1);
                points.push(g.act(k, s));
            }
        }
    }
    let images: Vec<Vec<Rational>> = points.iter().map(|p| hm.image(p)).collect::<Result<_>>()?;
    let mut images_on_relations = true;
    let mut images_satisfy_inequalities = true;
    for y in &images {
        for r in &hm.relations {
            images_on_relations &= r.eval(y)? == Rational::from_integer(0.into());
        }
        for i in &hm.inequalities {
            images_satisfy_inequalities &= i.holds(y)?;
        }
    }

    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let mut pairs = 0;
    let separation_checked = matches!(action, GroupAction::Finite(_));
    if let GroupAction::Finite(g) = action {
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                pairs += 1;
                let same_image = images[i] == images[j];
                let same_orbit = (0..g.order()).any(|k| g.act(k, &points[i]) == points[j]);
                if same_image != same_orbit {
                    failures.push(SeparationFailure {
                        x: points[i].iter().map(format_rational).collect(),
                        y: points[j].iter().map(format_rational).collect(),
                        same_image,
                        same_orbit,
                    });
                }
            }
        }
    } else {
        notes.push("orbit separation is only checked for finite groups".into());
    }
    notes.push("completeness of the generators is not decided".into());
    Ok(EmbeddingReport {
        generators_invariant,
        relations_vanish,
        images: images.iter().map(|y| y.iter().map(format_rational).collect()).collect(),
        images_on_relations,
        images_satisfy_inequalities,
        separation_checked,
        pairs_checked: pairs,
        separation_failures: failures,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::FiniteGroup;
    use crate::qpoint;

    fn cone_map() -> HilbertMap {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        HilbertMap::new(
            ["x^2 - y^2", "2*x*y", "x^2 + y^2"].iter().map(|s| Polynomial::parse(s, &v).unwrap()).collect(),
            t.clone(),
            vec![Polynomial::parse("s^2 + t^2 - u^2", &t).unwrap()],
            vec![Inequality::parse("u >= 0", &t).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn cone_embedding() {
        let hm = cone_map();
        assert_eq!(hm.image(&qpoint(&[1, 1])).unwrap(), qpoint(&[0, 2, 2]));
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let samples: Vec<Vec<Rational>> = (-3..=3).flat_map(|a| (-2..=2).map(move |b| qpoint(&[a, b]))).collect();
        let r = hilbert_embed(&z2, &hm, &samples).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.pairs_checked > 1000);
    }

    #[test]
    fn incomplete_generators_fail_separation() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let hm = HilbertMap::new(
            vec![Polynomial::parse("x^2 + y^2", &v).unwrap()],
            vec!["r".into()],
            vec![],
            vec![],
        )
        .unwrap();
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let r = hilbert_embed(&z2, &hm, &[qpoint(&[1, 0]), qpoint(&[0, 1])]).unwrap();
        assert!(!r.passed());
        assert!(r.separation_failures.iter().any(|f| f.same_image && !f.same_orbit));
    }

    #[test]
    fn identity_group() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let hm = HilbertMap::new(
            vec![Polynomial::var(2, 0), Polynomial::var(2, 1)],
            v.clone(),
            vec![],
            vec![],
        )
        .unwrap();
        let triv = GroupAction::Finite(FiniteGroup::trivial(2));
        let r = hilbert_embed(&triv, &hm, &[qpoint(&[1, 2]), qpoint(&[2, 1])]).unwrap();
        assert!(r.passed());
        assert_eq!(r.images, vec![vec!["1", "2"], vec!["2", "1"]]);
    }

    #[test]
    fn non_invariant_generator_rejected() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let hm = HilbertMap::new(vec![Polynomial::parse("x", &v).unwrap()], vec!["s".into()], vec![], vec![]).unwrap();
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        assert!(matches!(hilbert_embed(&z2, &hm, &[]), Err(Error::NotInvariant(_))));
    }
}
