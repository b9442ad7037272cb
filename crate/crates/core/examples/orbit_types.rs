//! Orbit-type stratifications and Hilbert-map embeddings of quotients.
//!
//! cargo run --example orbit_types

use rand::SeedableRng;
use stratlab::actions::{hilbert_embed, orbit_type_partition, FiniteGroup, GroupAction, HilbertMap, TorusAction};
use stratlab::poly::sample::random_point;
use stratlab::poly::Polynomial;
use stratlab::space::{Inequality, SpaceDef};
use stratlab::Result;

fn show(name: &str, g: &GroupAction, space: &SpaceDef) -> Result<()> {
    let s = orbit_type_partition(g, space)?;
    println!("{name}:");
    for t in &s.orbit_types {
        println!("  stabilizer {:<24} dim {} strata {}{}", t.stabilizer, t.dim, t.strata.len(), if t.principal { "  principal" } else { "" });
    }
    for st in &s.strata {
        println!("    {:<6} dim {} {}", st.label, st.dim, st.description.join(" or "));
    }
    Ok(())
}

fn main() -> Result<()> {
    let plane = SpaceDef::euclidean(vec!["x".into(), "y".into()]);
    show("Z2 on the plane", &GroupAction::Finite(FiniteGroup::antipodal(2)), &plane)?;
    show("Z2 x Z2 sign flips on the plane", &GroupAction::Finite(FiniteGroup::sign_flips(2)), &plane)?;

    let r4 = SpaceDef::euclidean(["x1", "y1", "x2", "y2"].map(String::from).to_vec());
    let torus = TorusAction::new(4, 1, vec![(0, 1), (2, 3)], vec![vec![1], vec![2]])?;
    show("circle on R^4, weights (1, 2)", &GroupAction::Torus(torus), &r4)?;

    // the cone: (x, y) -> (x^2 - y^2, 2xy, x^2 + y^2)
    let v = plane.var_names();
    let t = ["s", "t", "u"].map(String::from).to_vec();
    let hm = HilbertMap::new(
        ["x^2 - y^2", "2*x*y", "x^2 + y^2"].iter().map(|p| Polynomial::parse(p, v)).collect::<Result<_>>()?,
        t.clone(),
        vec![Polynomial::parse("s^2 + t^2 - u^2", &t)?],
        vec![Inequality::parse("u >= 0", &t)?],
    )?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<_> = (0..30).map(|_| random_point(&mut rng, 2)).collect();
    let r = hilbert_embed(&GroupAction::Finite(FiniteGroup::antipodal(2)), &hm, &samples)?;
    println!(
        "cone embedding: relations vanish {:?}, {} pairs checked, {} separation failures",
        r.relations_vanish,
        r.pairs_checked,
        r.separation_failures.len()
    );
    Ok(())
}
