//! Acceptance criteria, one line per criterion.
//!
//! The pass/fail lines go straight to stdout, so they show up in plain
//! `cargo test` output.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stratlab::actions::{hilbert_embed, orbit_type_partition, FiniteGroup, GroupAction, HilbertMap};
use stratlab::cli::gallery::corpus_file;
use stratlab::fields::{
    check_local_completeness, classify, flow, is_admissible, orbit_explore, Classification, ClassifyParams,
    CompletenessVerdict, Derivation, FlowParams, OrbitParams,
};
use stratlab::forms::{find_descent_witness, is_basic, DescentOutcome, DifferentialForm, PolyMap};
use stratlab::hamiltonian::{derive_momentum_map, hamiltonian_vector_field, poisson_bracket, SymplecticForm};
use stratlab::poly::sample::{random_point, random_polynomial};
use stratlab::poly::{Polynomial, RationalFunction};
use stratlab::space::{Inequality, SpaceDef};
use stratlab::{q, qpoint, Result};

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn poly(s: &str, vars: &[String]) -> Polynomial {
    Polynomial::parse(s, vars).expect("polynomial")
}

fn zariski_dimensions() -> Outcome {
    let lines = SpaceDef::parse(&["x", "y"], &["x^2*y - x*y^2"], &[])?;
    let axes = SpaceDef::parse(&["x", "y", "z"], &["x*y", "y*z", "x*z"], &[])?;
    let circle = SpaceDef::parse(&["x", "y"], &["x^2 + y^2 - 1"], &[])?;
    let d = [
        lines.zariski_tangent(&qpoint(&[0, 0]))?.dim(),
        axes.zariski_tangent(&qpoint(&[0, 0, 0]))?.dim(),
        circle.zariski_tangent(&qpoint(&[1, 0]))?.dim(),
    ];
    Ok((d == [2, 3, 1], format!("dims {d:?}")))
}

fn cone() -> Result<(GroupAction, HilbertMap)> {
    let v = names(&["x", "y"]);
    let t = names(&["s", "t", "u"]);
    let hm = HilbertMap::new(
        ["x^2 - y^2", "2*x*y", "x^2 + y^2"].iter().map(|s| poly(s, &v)).collect(),
        t.clone(),
        vec![poly("s^2 + t^2 - u^2", &t)],
        vec![Inequality::parse("u >= 0", &t)?],
    )?;
    Ok((GroupAction::Finite(FiniteGroup::antipodal(2)), hm))
}

fn cone_pullback() -> Outcome {
    let f = corpus_file("cone.sl")?;
    let (g, hm) = cone()?;
    let t = names(&["s", "t", "u"]);
    let sigma = DifferentialForm::parse("1/(4*u) ds^dt", &t, Some(2))?;
    let area = DifferentialForm::parse("dx^dy", f.var_names(), Some(2))?;
    let pulled = PolyMap::from(&hm).pullback(&sigma)?;
    let st = f.space.strata().iter().find(|s| s.name == "principal").expect("principal stratum");
    let report = stratlab::hamiltonian::check_sjamaar(&g, &hm, st, &sigma, &area)?;
    Ok((
        pulled == area && report.verified,
        format!("pullback {}, sjamaar {}", pulled.to_string_with(f.var_names()), report.verified),
    ))
}

fn hilbert_embedding() -> Outcome {
    let (g, hm) = cone()?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<_> = (0..40).map(|_| random_point(&mut rng, 2)).collect();
    let r = hilbert_embed(&g, &hm, &samples)?;
    let relation_zero = hm.composed_relations()?.iter().all(Polynomial::is_zero);

    let v = names(&["x1", "x2", "x3"]);
    let t = names(&["a1", "a2", "a3"]);
    let orthant = HilbertMap::new(
        v.iter().map(|x| poly(&format!("{x}^2"), &v)).collect(),
        t.clone(),
        vec![],
        t.iter().map(|a| Inequality::parse(&format!("{a} >= 0"), &t)).collect::<Result<_>>()?,
    )?;
    let flips = GroupAction::Finite(FiniteGroup::sign_flips(3));
    let samples: Vec<_> = (0..20).map(|_| random_point(&mut rng, 3)).collect();
    let o = hilbert_embed(&flips, &orthant, &samples)?;
    let in_orthant = samples
        .iter()
        .all(|p| orthant.image(p).map(|y| y.iter().all(|c| *c >= q(0))).unwrap_or(false));

    let ok = relation_zero
        && r.passed()
        && r.pairs_checked >= 1000
        && o.passed()
        && o.images_satisfy_inequalities
        && in_orthant;
    Ok((
        ok,
        format!(
            "{} cone pairs, {} failures; orthant pairs {}, images in orthant {in_orthant}",
            r.pairs_checked,
            r.separation_failures.len(),
            o.pairs_checked
        ),
    ))
}

fn classification() -> Outcome {
    let v = names(&["x"]);
    let dx = Derivation::parse(&["1"], &v)?;
    let half = SpaceDef::parse(&["x"], &[], &["x >= 0"])?;
    let line = SpaceDef::euclidean(v.clone());
    let sn = corpus_file("sniatycki.sl")?;
    let p = ClassifyParams::default();
    let got = [
        classify(&half, &dx, &[], &p)?.verdict,
        classify(&line, &dx, &[], &p)?.verdict,
        classify(&sn.space, &sn.field("d_x")?, &[], &p)?.verdict,
    ];
    let want = [Classification::DerivationOnly, Classification::VectorField, Classification::Unknown];
    Ok((got == want, format!("{got:?}")))
}

fn completeness_refutation() -> Outcome {
    let v = names(&["x", "y"]);
    let plane = SpaceDef::euclidean(v.clone());
    let fam = vec![Derivation::parse(&["1", "0"], &v)?, Derivation::parse(&["0", "x"], &v)?];
    let r = check_local_completeness(&plane, &fam, &[qpoint(&[0, 0]), qpoint(&[0, 2])], &[1.0])?;
    let w = r.witnesses.iter().find(|w| w.x_index == 1 && w.y_index == 0 && w.t == 1.0 && w.point[0] == "0");
    let exact = w.and_then(|w| w.exact.clone());
    let symbolic = w.and_then(|w| w.symbolic.clone());
    let ok = r.verdict == CompletenessVerdict::Violated
        && exact.as_deref() == Some("d_x + d_y")
        && symbolic.as_deref() == Some("d_x + t*d_y")
        && w.is_some_and(|w| w.residual == 0.0);
    Ok((ok, format!("{:?}, exact {exact:?}, symbolic {symbolic:?}", r.verdict)))
}

fn orbit_consistency() -> Outcome {
    let v = names(&["x", "y"]);
    let plane = SpaceDef::euclidean(v.clone());
    let fam = vec![Derivation::rotation(2, 0, 1), Derivation::radial(2)];
    let params = OrbitParams { depth: 2, ..OrbitParams::default() };
    let o = orbit_explore(&plane, &fam, &qpoint(&[1, 0]), &params)?;
    let z = orbit_explore(&plane, &fam, &qpoint(&[0, 0]), &params)?;
    let ok = o.est_dim == 2
        && o.seed_delta == 2
        && o.tangent_rank_along.iter().all(|&d| d == o.est_dim)
        && o.drift_max <= 1e-8
        && z.points.len() == 1
        && z.points[0].iter().all(|c| *c == 0.0)
        && z.seed_delta == 0;
    Ok((
        ok,
        format!(
            "est_dim {} over {} points, drift {:.1e}; origin orbit {} point(s), delta {}",
            o.est_dim,
            o.points.len(),
            o.drift_max,
            z.points.len(),
            z.seed_delta
        ),
    ))
}

fn orbit_type_strata() -> Outcome {
    let plane = SpaceDef::euclidean(names(&["x", "y"]));
    let z2 = orbit_type_partition(&GroupAction::Finite(FiniteGroup::antipodal(2)), &plane)?;
    let z22 = orbit_type_partition(&GroupAction::Finite(FiniteGroup::sign_flips(2)), &plane)?;
    let dims = |s: &stratlab::actions::Stratification| {
        let mut d: Vec<usize> = s.strata.iter().map(|x| x.dim).collect();
        d.sort();
        d
    };
    let type_dims = |s: &stratlab::actions::Stratification| {
        let mut d: Vec<(usize, usize)> = s.orbit_types.iter().map(|t| (t.dim, t.strata.len())).collect();
        d.sort();
        d
    };
    let principal_ok = |s: &stratlab::actions::Stratification| {
        let p = s.principal_set();
        p.dim == 2 && s.orbit_types.iter().filter(|t| !t.principal).all(|t| t.dim < 2)
    };
    // Z2: origin and the punctured plane. Z2^2: origin, two punctured axes
    // (two half-lines each), four open quadrants.
    let ok = dims(&z2) == [0, 2]
        && type_dims(&z22) == [(0, 1), (1, 2), (1, 2), (2, 4)]
        && principal_ok(&z2)
        && principal_ok(&z22);
    Ok((ok, format!("Z2 {:?}, Z2^2 {:?}", dims(&z2), type_dims(&z22))))
}

fn momentum_maps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut detail = Vec::new();
    let mut ok = true;
    for file in ["circleaction.sl", "weights.sl"] {
        let f = corpus_file(file)?;
        let g = f.group.as_ref().expect("group");
        let w = f.symplectic.as_ref().expect("symplectic");
        let mm = derive_momentum_map(g, w)?;
        ok &= mm.verify(w)?.iter().all(|&b| b);
        let n = f.space.nvars();
        let v = f.var_names().to_vec();
        // generators of the invariant ring
        let invariants: Vec<Polynomial> = if n == 2 {
            vec![poly("x^2 + y^2", &v)]
        } else {
            ["x1^2 + y1^2", "x2^2 + y2^2", "x1*x2 - y1*y2", "x1*y2 + y1*x2"].iter().map(|s| poly(s, &v)).collect()
        };
        let mut hamiltonians: Vec<Polynomial> = mm.components.clone();
        for _ in 0..5 {
            let p = random_polynomial(&mut rng, invariants.len(), 2, 4);
            hamiltonians.push(p.compose(&invariants)?);
        }
        for h in &hamiltonians {
            ok &= g.is_invariant_poly(h);
            let xf = hamiltonian_vector_field(w, h)?;
            for phi in &mm.components {
                ok &= xf.apply(phi).is_zero();
            }
        }
        detail.push(format!("Phi = {}", mm.strings(&v).join(", ")));
    }
    Ok((ok, detail.join("; ")))
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, deg: usize, max_poly: u32) -> Result<DifferentialForm> {
    let mut alpha = DifferentialForm::zero(n, deg);
    for idx in stratlab::linalg::subsets(n, deg) {
        let c = RationalFunction::from(random_polynomial(rng, n, max_poly, 3));
        alpha = alpha.add(&DifferentialForm::monomial(c, &idx)?)?;
    }
    Ok(alpha)
}

fn rf(p: Polynomial) -> RationalFunction {
    RationalFunction::from(p)
}

fn property_suites() -> Outcome {
    const CASES: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures: Vec<&str> = Vec::new();
    let mut check = |name: &'static str, ok: bool| {
        if !ok && !failures.contains(&name) {
            failures.push(name);
        }
    };
    let v2 = names(&["x", "y"]);
    let circle = SpaceDef::parse(&["x", "y"], &["x^2 + y^2 - 1"], &[])?;
    let rot = Derivation::rotation(2, 0, 1);
    let omega = SymplecticForm::standard(4)?;
    let plane = SpaceDef::euclidean(v2.clone());
    for case in 0..CASES {
        let n = 3;
        let p = rng.gen_range(0..=2);
        let a = random_form(&mut rng, n, p, 2)?;
        let q_deg = rng.gen_range(0..=1);
        let b = random_form(&mut rng, n, q_deg, 2)?;
        check("d o d = 0", a.exterior_d().exterior_d().is_zero());
        let lhs = a.wedge(&b)?.exterior_d();
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let rhs = a.exterior_d().wedge(&b)?.add(&a.wedge(&b.exterior_d())?.scale_rf(&RationalFunction::constant(n, q(sign))))?;
        check("graded Leibniz", lhs == rhs);

        let f = PolyMap::new(2, (0..3).map(|_| random_polynomial(&mut rng, 2, 2, 3)).collect())?;
        let g = PolyMap::new(3, (0..3).map(|_| random_polynomial(&mut rng, 3, 2, 3)).collect())?;
        let c_deg = rng.gen_range(0..=2);
        let c = random_form(&mut rng, 3, c_deg, 1)?;
        let gf = g.compose(&f)?;
        check("pullback functoriality", gf.pullback(&c)? == f.pullback(&g.pullback(&c)?)?);
        check("pullback commutes with d", g.pullback(&c.exterior_d())? == g.pullback(&c)?.exterior_d());

        let x = Derivation::new((0..2).map(|_| random_polynomial(&mut rng, 2, 2, 3)).collect())?;
        let (u, w) = (random_polynomial(&mut rng, 2, 2, 3), random_polynomial(&mut rng, 2, 2, 3));
        check("derivation Leibniz", x.apply(&(&u * &w)) == &(&x.apply(&u) * &w) + &(&u * &x.apply(&w)));

        let h1 = random_polynomial(&mut rng, 2, 2, 3);
        let h2 = random_polynomial(&mut rng, 2, 2, 3);
        let k = random_polynomial(&mut rng, 2, 1, 2);
        let eq = circle.equations()[0].clone();
        let x1 = rot.mul_poly(&h1).add(&Derivation::coordinate(2, case % 2).mul_poly(&(&eq * &k)));
        let x2 = rot.mul_poly(&h2);
        let adm = |d: &Derivation| is_admissible(&circle, d).is_admissible();
        check("admissible inputs", adm(&x1) && adm(&x2));
        check("admissible closed under +", adm(&x1.add(&x2)));
        check("admissible closed under scaling", adm(&x1.mul_poly(&k)));
        check("admissible closed under bracket", adm(&x1.bracket(&x2)));

        let (pf, pg, ph) = (
            rf(random_polynomial(&mut rng, 4, 2, 3)),
            rf(random_polynomial(&mut rng, 4, 2, 3)),
            rf(random_polynomial(&mut rng, 4, 2, 3)),
        );
        let br = |a: &RationalFunction, b: &RationalFunction| poisson_bracket(&omega, a, b);
        check("Poisson antisymmetry", br(&pf, &pg)? == -br(&pg, &pf)?);
        check("Poisson Leibniz", br(&pf, &(&pg * &ph))? == &(&pg * &br(&pf, &ph)?) + &(&ph * &br(&pf, &pg)?));
        let jac = &(&br(&pf, &br(&pg, &ph)?)? + &br(&pg, &br(&ph, &pf)?)?) + &br(&ph, &br(&pf, &pg)?)?;
        check("Poisson Jacobi", jac.is_zero());

        let y = Derivation::new(vec![
            poly("-y", &v2),
            &poly("x", &v2) + &Polynomial::constant(2, stratlab::qf(rng.gen_range(-4..=4), 4)),
        ])?;
        let x0 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let fp = FlowParams::default();
        let one = flow(&plane, &y, &x0, s, &fp)?;
        let two = flow(&plane, &y, one.endpoint(), t, &fp)?;
        let direct = flow(&plane, &y, &x0, s + t, &fp)?;
        let err = two.endpoint().iter().zip(direct.endpoint()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        check("flow group law", err <= 1e-6);
    }
    let ok = failures.is_empty();
    Ok((ok, if ok { format!("{CASES} cases per identity") } else { format!("failed: {failures:?}") }))
}

fn descent_witnesses() -> Outcome {
    let (g, hm) = cone()?;
    let plane = SpaceDef::euclidean(names(&["x", "y"]));
    let reynolds = |p: &Polynomial, odd: bool| {
        let m = p.compose(&[-&Polynomial::var(2, 0), -&Polynomial::var(2, 1)]).expect("arity");
        let s = if odd { p - &m } else { p + &m };
        s.scale(&stratlab::qf(1, 2))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut found = 0;
    let mut basic = 0;
    let mut bad = Vec::new();
    for i in 0..20 {
        let deg = i % 3;
        let mut alpha = DifferentialForm::zero(2, deg);
        for idx in stratlab::linalg::subsets(2, deg) {
            // x -> -x multiplies dx_i by -1, so coefficient parity follows the degree
            let c = reynolds(&random_polynomial(&mut rng, 2, 3, 4), deg % 2 == 1);
            alpha = alpha.add(&DifferentialForm::monomial(rf(c), &idx)?)?;
        }
        let (out, _) = find_descent_witness(&g, &hm, &alpha, None)?;
        match out {
            DescentOutcome::Witness(beta) => {
                let back = PolyMap::from(&hm).pullback(&beta)?;
                if back == alpha {
                    found += 1;
                }
                if is_basic(&g, &back, &plane)? {
                    basic += 1;
                }
            }
            DescentOutcome::Exhausted { .. } => bad.push(alpha.to_string_with(plane.var_names())),
        }
    }
    Ok((found == 20 && basic == 20, format!("{found}/20 witnesses pull back exactly, {basic}/20 basic {bad:?}")))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("Zariski dimensions", zariski_dimensions),
        ("cone pullback identity", cone_pullback),
        ("Hilbert embedding", hilbert_embedding),
        ("vector-field classification", classification),
        ("local-completeness refutation", completeness_refutation),
        ("orbit/rank consistency", orbit_consistency),
        ("orbit-type stratifications", orbit_type_strata),
        ("momentum maps", momentum_maps),
        ("property suites", property_suites),
        ("descent witnesses", descent_witnesses),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let line = format!("criterion {:>2} {:<30} {}  ({detail})\n", i + 1, name, if ok { "PASS" } else { "FAIL" });
        // written past the test harness capture so the lines always show
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

