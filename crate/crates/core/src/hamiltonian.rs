//! Constant symplectic forms on ℝ²ⁿ, Hamiltonian fields, Poisson brackets,
//! momentum maps of linear torus actions and symplectic quotient strata.

use serde::Serialize;

use crate::actions::{orbit_type_partition, GroupAction, HilbertMap, Stratification};
use crate::error::{Error, Result};
use crate::fields::Derivation;
use crate::forms::{is_invariant, DifferentialForm, PolyMap};
use crate::linalg;
use crate::poly::{Monomial, Polynomial, RationalFunction};
use crate::space::{SpaceDef, StratumParam};
use crate::Rational;

use num_traits::{One, Signed, Zero};

type Matrix = Vec<Vec<Rational>>;

/// `ω = Σ_{i<j} Ω_ij dxᵢ∧dxⱼ` with constant antisymmetric invertible `Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticForm {
    matrix: Matrix,
    inverse: Matrix,
}

impl SymplecticForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        for i in 0..n {
            for j in 0..n {
                if matrix[i][j] != -matrix[j][i].clone() {
                    return Err(Error::Invalid(format!("matrix is not antisymmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let inverse = linalg::inverse(&matrix).ok_or_else(|| Error::Invalid("matrix is degenerate".into()))?;
        Ok(SymplecticForm { matrix, inverse })
    }

    /// `dx₁∧dy₁ + … + dxₙ∧dyₙ` with variables ordered `x₁, y₁, x₂, y₂, …`.
    pub fn standard(dim: usize) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Invalid(format!("standard form needs a positive even dimension, got {dim}")));
        }
        let mut m = vec![vec![Rational::zero(); dim]; dim];
        for k in 0..dim / 2 {
            m[2 * k][2 * k + 1] = Rational::one();
            m[2 * k + 1][2 * k] = -Rational::one();
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Whether this is [`SymplecticForm::standard`] of its dimension.
    pub fn is_standard(&self) -> bool {
        Self::standard(self.dim()).is_ok_and(|s| s == *self)
    }

    pub fn to_form(&self) -> DifferentialForm {
        let n = self.dim();
        let terms = linalg::subsets(n, 2)
            .into_iter()
            .filter(|ij| !self.matrix[ij[0]][ij[1]].is_zero())
            .map(|ij| (RationalFunction::constant(n, self.matrix[ij[0]][ij[1]].clone()), ij))
            .collect();
        DifferentialForm::from_terms(n, 2, terms).expect("well-formed")
    }

    /// `ω(u, v) = uᵀ Ω v`.
    pub fn pair(&self, u: &[Rational], v: &[Rational]) -> Rational {
        u.iter().zip(linalg::mat_vec(&self.matrix, v)).map(|(a, b)| a * b).sum()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: n });
        }
        Ok(())
    }
}

/// `X_f` with `X_f ⌟ ω = -df`, i.e. `X_f = Ω⁻¹ ∇f`.
pub fn hamiltonian_vector_field(omega: &SymplecticForm, f: &Polynomial) -> Result<Derivation> {
    omega.check_dim(f.nvars())?;
    let n = omega.dim();
    let grad = f.gradient();
    let comps = (0..n)
        .map(|i| {
            (0..n).fold(Polynomial::zero(n), |acc, j| {
                let c = &omega.inverse[i][j];
                if c.is_zero() {
                    acc
                } else {
                    &acc + &grad[j].scale(c)
                }
            })
        })
        .collect();
    Derivation::new(comps)
}

/// `{f, g} = ω(X_f, X_g) = -∇fᵀ Ω⁻¹ ∇g`; defined for rational functions.
pub fn poisson_bracket(omega: &SymplecticForm, f: &RationalFunction, g: &RationalFunction) -> Result<RationalFunction> {
    omega.check_dim(f.nvars())?;
    omega.check_dim(g.nvars())?;
    let n = omega.dim();
    let df: Vec<RationalFunction> = (0..n).map(|i| f.derivative(i)).collect();
    let dg: Vec<RationalFunction> = (0..n).map(|i| g.derivative(i)).collect();
    let mut out = RationalFunction::zero(n);
    for i in 0..n {
        if df[i].is_zero() {
            continue;
        }
        for j in 0..n {
            let c = &omega.inverse[i][j];
            if c.is_zero() || dg[j].is_zero() {
                continue;
            }
            out = &out - &(&df[i] * &dg[j]).scale(c);
        }
    }
    Ok(out)
}

/// Per-generator components `Φ^ξ` of a momentum map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumMap {
    pub generators: Vec<Derivation>,
    pub components: Vec<Polynomial>,
}

impl MomentumMap {
    pub fn nvars(&self) -> usize {
        self.generators.first().map_or(0, Derivation::nvars)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// `ξ_M ⌟ ω + dΦ^ξ = 0` for each generator, exactly.
    pub fn verify(&self, omega: &SymplecticForm) -> Result<Vec<bool>> {
        let w = omega.to_form();
        self.generators
            .iter()
            .zip(&self.components)
            .map(|(xi, phi)| {
                let lhs = w.interior(xi)?;
                let dphi = DifferentialForm::function(phi.clone().into()).exterior_d();
                Ok(lhs.add(&dphi)?.is_zero())
            })
            .collect()
    }

    pub fn strings(&self, names: &[String]) -> Vec<String> {
        self.components.iter().map(|c| c.to_string_with(names)).collect()
    }
}

/// Integrates `-ξ_M ⌟ ω` for each torus generator, normalised by `Φ(0) = 0`.
/// Finite groups have a zero-dimensional Lie algebra and get an empty map.
pub fn derive_momentum_map(action: &GroupAction, omega: &SymplecticForm) -> Result<MomentumMap> {
    omega.check_dim(action.dim())?;
    let n = omega.dim();
    let w = omega.to_form();
    let generators = action.infinitesimal_generators();
    let mut components = Vec::with_capacity(generators.len());
    for xi in &generators {
        let alpha = w.interior(xi)?.neg();
        if !alpha.exterior_d().is_zero() {
            return Err(Error::NotClosed(format!(
                "-ξ ⌟ ω is not closed for ξ = {xi}; the action does not preserve ω"
            )));
        }
        // Φ(x) = ∫₀¹ Σ αᵢ(tx) xᵢ dt; a degree-d term of αᵢ contributes 1/(d+1)
        let mut phi = Polynomial::zero(n);
        for (idx, coeff) in alpha.terms() {
            let i = idx[0];
            let p = coeff.as_polynomial().expect("polynomial coefficients");
            for (m, c) in p.terms() {
                let weight = Rational::new(1.into(), (m.degree() as i64 + 1).into());
                phi = &phi + &Polynomial::from_terms(n, [(m.mul(&Monomial::var(n, i)), c * &weight)]);
            }
        }
        components.push(phi);
    }
    let mm = MomentumMap { generators, components };
    if !mm.verify(omega)?.into_iter().all(|b| b) {
        return Err(Error::NotClosed("momentum identity fails after integration".into()));
    }
    Ok(mm)
}

/// Symmetric matrix `H` of a homogeneous quadratic `xᵀ H x`.
fn quadratic_matrix(p: &Polynomial) -> Option<Matrix> {
    if !p.is_homogeneous() || p.total_degree() != 2 {
        return None;
    }
    let n = p.nvars();
    let half = Rational::new(1.into(), 2.into());
    let mut h = vec![vec![Rational::zero(); n]; n];
    for (m, c) in p.terms() {
        let e = m.exponents();
        let vars: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match vars.as_slice() {
            [i] => h[*i][*i] = c.clone(),
            [i, j] => {
                h[*i][*j] = c * &half;
                h[*j][*i] = c * &half;
            }
            _ => return None,
        }
    }
    Some(h)
}

/// Exact semidefiniteness test by symmetric elimination: `Some(true)` for
/// positive, `Some(false)` for negative semidefinite, `None` if indefinite.
fn semidefinite_sign(h: &Matrix) -> Option<bool> {
    let n = h.len();
    let mut a = h.clone();
    let mut sign: Option<bool> = None;
    for k in 0..n {
        let d = a[k][k].clone();
        if d.is_zero() {
            if (k..n).any(|j| !a[k][j].is_zero()) {
                return None;
            }
            continue;
        }
        let pos = d.is_positive();
        if sign.is_some_and(|s| s != pos) {
            return None;
        }
        sign = Some(pos);
        for i in k + 1..n {
            let f = &a[i][k] / &d;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    Some(sign.unwrap_or(true))
}

/// `Z = Φ⁻¹(0)`. A semidefinite quadratic component is replaced by the
/// linear forms cutting out its kernel, so the equations stay real radical
/// (weight 1 on ℝ² gives `{x, y}` rather than `{x² + y²}`).
pub fn zero_level(action: &GroupAction, phi: &MomentumMap, names: Vec<String>) -> Result<SpaceDef> {
    let n = action.dim();
    if names.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: names.len() });
    }
    let mut eqs: Vec<Polynomial> = Vec::new();
    for c in &phi.components {
        if c.is_zero() {
            continue;
        }
        match quadratic_matrix(c).filter(|h| semidefinite_sign(h).is_some()) {
            Some(h) => {
                let rows = linalg::independent_subset(&h, n);
                eqs.extend(rows.iter().map(|r| Polynomial::linear(&linalg::primitive_integer_vector(r.clone()))));
            }
            None => eqs.push(c.clone()),
        }
    }
    let z = SpaceDef::new(names, eqs, Vec::new())?;
    action.check_space_invariant(&z)?;
    Ok(z)
}

/// Orbit-type strata of the zero level, with Hilbert-map images of the
/// stratum samples when a map is given.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedStrata {
    pub stratification: Stratification,
    pub quotient_samples: Option<Vec<Vec<f64>>>,
}

pub fn reduced_strata(action: &GroupAction, z: &SpaceDef, hm: Option<&HilbertMap>) -> Result<ReducedStrata> {
    let stratification = orbit_type_partition(action, z)?;
    let quotient_samples = hm
        .map(|hm| {
            stratification
                .strata
                .iter()
                .map(|s| hm.generators.iter().map(|g| g.eval_f64(&s.sample)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(ReducedStrata { stratification, quotient_samples })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SjamaarReport {
    pub verified: bool,
    pub alpha_invariant: bool,
    /// `c*α̃` in the stratum parameters.
    pub upstairs: String,
    /// `(hm ∘ c)*σ` in the stratum parameters.
    pub downstairs: String,
}

/// Checks `i*α̃ = π*σ` on the principal stratum: both sides are pulled back
/// to the stratum parameters through its parametrisation `c` and compared
/// exactly. Also requires `α̃` to be invariant.
pub fn check_sjamaar(
    action: &GroupAction,
    hm: &HilbertMap,
    principal: &StratumParam,
    sigma: &DifferentialForm,
    alpha: &DifferentialForm,
) -> Result<SjamaarReport> {
    let n = action.dim();
    if alpha.nvars() != n || principal.map.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: alpha.nvars() });
    }
    if sigma.nvars() != hm.target_dim() {
        return Err(Error::DimensionMismatch { expected: hm.target_dim(), got: sigma.nvars() });
    }
    let c = PolyMap::new(principal.domain_dim(), principal.map.clone())?;
    let pi_c = PolyMap::from(hm).compose(&c)?;
    let downstairs = pi_c.pullback(sigma)?;
    let upstairs = c.pullback(alpha)?;
    let alpha_invariant = is_invariant(action, alpha)?;
    let same = if upstairs.is_zero() && downstairs.is_zero() {
        true
    } else {
        upstairs.degree() == downstairs.degree() && upstairs == downstairs
    };
    Ok(SjamaarReport {
        verified: same && alpha_invariant,
        alpha_invariant,
        upstairs: upstairs.to_string_with(&principal.params),
        downstairs: downstairs.to_string_with(&principal.params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{FiniteGroup, TorusAction};
    use crate::poly::parse_rational_function;
    use crate::space::Inequality;
    use crate::{q, qf};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn names4() -> Vec<String> {
        ["x1", "y1", "x2", "y2"].iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str, v: &[String]) -> Polynomial {
        Polynomial::parse(s, v).unwrap()
    }

    fn rf(s: &str, v: &[String]) -> RationalFunction {
        parse_rational_function(s, v).unwrap()
    }

    #[test]
    fn symplectic_form_checks() {
        assert!(SymplecticForm::new(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).is_err());
        assert!(SymplecticForm::new(vec![vec![q(0), q(0)], vec![q(0), q(0)]]).is_err());
        assert!(SymplecticForm::standard(3).is_err());
        let w = SymplecticForm::standard(4).unwrap();
        assert!(w.to_form().exterior_d().is_zero());
        assert_eq!(w.to_form().to_string_with(&names4()), "dx1^dy1 + dx2^dy2");
    }

    #[test]
    fn hamiltonian_fields() {
        let v = xy();
        let w = SymplecticForm::standard(2).unwrap();
        let x = hamiltonian_vector_field(&w, &p("(x^2 + y^2)/2", &v)).unwrap();
        assert_eq!(x, Derivation::rotation(2, 0, 1));
        assert!(hamiltonian_vector_field(&w, &p("5", &v)).unwrap().is_zero());
        assert_eq!(hamiltonian_vector_field(&w, &p("x", &v)).unwrap(), Derivation::coordinate(2, 1));
        // X ⌟ ω = -df
        let f = p("x^3*y - 2*y^2", &v);
        let xf = hamiltonian_vector_field(&w, &f).unwrap();
        let lhs = w.to_form().interior(&xf).unwrap();
        let df = DifferentialForm::function(f.into()).exterior_d();
        assert!(lhs.add(&df).unwrap().is_zero());
    }

    #[test]
    fn brackets() {
        let v = xy();
        let w = SymplecticForm::standard(2).unwrap();
        assert_eq!(poisson_bracket(&w, &rf("x", &v), &rf("y", &v)).unwrap(), rf("1", &v));
        let f = rf("x^2*y + 1/(1 + x^2)", &v);
        assert!(poisson_bracket(&w, &f, &f).unwrap().is_zero());
        assert_eq!(poisson_bracket(&w, &rf("x^2/2", &v), &rf("y", &v)).unwrap(), rf("x", &v));
        // agrees with ω(X_f, X_g)
        let (f, g) = (p("x^2*y", &v), p("x + y^3", &v));
        let xf = hamiltonian_vector_field(&w, &f).unwrap();
        let xg = hamiltonian_vector_field(&w, &g).unwrap();
        let pt = vec![qf(1, 3), q(-2)];
        let direct = w.pair(&xf.eval(&pt).unwrap(), &xg.eval(&pt).unwrap());
        let br = poisson_bracket(&w, &f.into(), &g.into()).unwrap();
        assert_eq!(br.eval(&pt).unwrap(), direct);
    }

    #[test]
    fn momentum_maps() {
        let v = xy();
        let w = SymplecticForm::standard(2).unwrap();
        let circle = GroupAction::Torus(TorusAction::circle(1));
        let mm = derive_momentum_map(&circle, &w).unwrap();
        assert_eq!(mm.components, vec![p("(x^2 + y^2)/2", &v)]);

        let n4 = names4();
        let t = TorusAction::new(4, 1, vec![(0, 1), (2, 3)], vec![vec![1], vec![-1]]).unwrap();
        let mm = derive_momentum_map(&GroupAction::Torus(t), &SymplecticForm::standard(4).unwrap()).unwrap();
        assert_eq!(mm.components, vec![p("(x1^2 + y1^2 - x2^2 - y2^2)/2", &n4)]);

        let trivial = TorusAction::new(2, 1, vec![(0, 1)], vec![vec![0]]).unwrap();
        let mm = derive_momentum_map(&GroupAction::Torus(trivial), &w).unwrap();
        assert!(mm.components[0].is_zero());

        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        assert!(derive_momentum_map(&z2, &w).unwrap().components.is_empty());

        // the rotation does not preserve dx1^dx2 + dy1^dy2 paired across planes
        let bad = SymplecticForm::new(vec![
            vec![q(0), q(0), q(1), q(0)],
            vec![q(0), q(0), q(0), q(1)],
            vec![q(-1), q(0), q(0), q(0)],
            vec![q(0), q(-1), q(0), q(0)],
        ])
        .unwrap();
        let t = TorusAction::new(4, 1, vec![(0, 1)], vec![vec![1]]).unwrap();
        assert!(matches!(derive_momentum_map(&GroupAction::Torus(t), &bad), Err(Error::NotClosed(_))));
    }

    #[test]
    fn zero_levels() {
        let n4 = names4();
        let t = GroupAction::Torus(TorusAction::new(4, 1, vec![(0, 1), (2, 3)], vec![vec![1], vec![-1]]).unwrap());
        let mm = derive_momentum_map(&t, &SymplecticForm::standard(4).unwrap()).unwrap();
        let z = zero_level(&t, &mm, n4.clone()).unwrap();
        assert_eq!(z.equations().len(), 1);
        assert_eq!(z.zariski_tangent(&[q(1), q(0), q(1), q(0)]).unwrap().dim(), 3);
        let strata = reduced_strata(&t, &z, None).unwrap().stratification;
        let mut dims: Vec<usize> = strata.strata.iter().map(|s| s.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![0, 3]);

        let circle = GroupAction::Torus(TorusAction::circle(1));
        let mm = derive_momentum_map(&circle, &SymplecticForm::standard(2).unwrap()).unwrap();
        let z = zero_level(&circle, &mm, xy()).unwrap();
        assert_eq!(z.equations().len(), 2);
        assert!(z.contains(&[q(0), q(0)]).unwrap());
        assert_eq!(z.zariski_tangent(&[q(0), q(0)]).unwrap().dim(), 0);
        let strata = reduced_strata(&circle, &z, None).unwrap().stratification;
        assert_eq!(strata.strata.len(), 1);
        assert_eq!(strata.strata[0].dim, 0);

        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let mm = derive_momentum_map(&z2, &SymplecticForm::standard(2).unwrap()).unwrap();
        let z = zero_level(&z2, &mm, xy()).unwrap();
        assert!(z.equations().is_empty());
        let red = reduced_strata(&z2, &z, None).unwrap().stratification;
        let mut dims: Vec<usize> = red.strata.iter().map(|s| s.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![0, 2]);
    }

    #[test]
    fn semidefinite_detection() {
        let v = xy();
        let h = |s: &str| quadratic_matrix(&p(s, &v)).unwrap();
        assert_eq!(semidefinite_sign(&h("x^2 + 2*x*y + y^2")), Some(true));
        assert_eq!(semidefinite_sign(&h("-x^2")), Some(false));
        assert_eq!(semidefinite_sign(&h("x^2 - y^2")), None);
        assert_eq!(semidefinite_sign(&h("x*y")), None);
    }

    fn cone() -> HilbertMap {
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        HilbertMap::new(
            ["x^2 - y^2", "2*x*y", "x^2 + y^2"].iter().map(|s| p(s, &xy())).collect(),
            t.clone(),
            vec![p("s^2 + t^2 - u^2", &t)],
            vec![],
        )
        .unwrap()
    }

    fn punctured_plane() -> StratumParam {
        let v = xy();
        StratumParam {
            name: "principal".into(),
            params: v.clone(),
            map: vec![p("x", &v), p("y", &v)],
            constraints: vec![Inequality::positive(p("x^2 + y^2", &v))],
            stabilizer: Some("trivial".into()),
        }
    }

    #[test]
    fn sjamaar_cone() {
        let t: Vec<String> = vec!["s".into(), "t".into(), "u".into()];
        let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
        let hm = cone();
        let sigma = DifferentialForm::from_terms(3, 2, vec![(rf("1/(4*u)", &t), vec![0, 1])]).unwrap();
        let area = DifferentialForm::from_terms(2, 2, vec![(rf("1", &xy()), vec![0, 1])]).unwrap();
        let r = check_sjamaar(&z2, &hm, &punctured_plane(), &sigma, &area).unwrap();
        assert!(r.verified, "{r:?}");

        let r = check_sjamaar(&z2, &hm, &punctured_plane(), &DifferentialForm::zero(3, 2), &DifferentialForm::zero(2, 2))
            .unwrap();
        assert!(r.verified);

        let ds = DifferentialForm::dx(3, 0);
        let r = check_sjamaar(&z2, &hm, &punctured_plane(), &ds, &DifferentialForm::dx(2, 0)).unwrap();
        assert!(!r.verified);
        assert_eq!(r.downstairs, "2*x dx - 2*y dy");

        let vanishing = DifferentialForm::from_terms(3, 1, vec![(rf("1/(u^2 - s^2 - t^2)", &t), vec![0])]).unwrap();
        assert!(matches!(
            check_sjamaar(&z2, &hm, &punctured_plane(), &vanishing, &DifferentialForm::dx(2, 0)),
            Err(Error::DenominatorVanishes(_))
        ));
    }
}
