//! Orbits of families of vector fields and a failure of local completeness.
//!
//! cargo run --example orbits

use stratlab::fields::{check_local_completeness, orbit_explore, Derivation, OrbitParams};
use stratlab::space::SpaceDef;
use stratlab::{qpoint, Result};

fn main() -> Result<()> {
    let plane = SpaceDef::euclidean(vec!["x".into(), "y".into()]);
    let names = plane.var_names();
    let family = vec![Derivation::rotation(2, 0, 1), Derivation::radial(2)];

    let params = OrbitParams { depth: 2, ..OrbitParams::default() };
    for seed in [qpoint(&[1, 0]), qpoint(&[0, 0])] {
        let o = orbit_explore(&plane, &family, &seed, &params)?;
        println!(
            "orbit of {:?}: {} points, est_dim {}, delta at seed {}, drift {:.1e}",
            stratlab::to_f64_point(&seed),
            o.points.len(),
            o.est_dim,
            o.seed_delta,
            o.drift_max
        );
    }

    // {d_x, x d_y} generates the whole plane but is not locally complete:
    // flowing d_y along x d_y tilts it.
    let shear = vec![Derivation::parse_expr("d_x", names)?, Derivation::parse_expr("x*d_y", names)?];
    let r = check_local_completeness(&plane, &shear, &[qpoint(&[0, 0])], &[1.0])?;
    println!("{{d_x, x*d_y}}: {:?}", r.verdict);
    for w in &r.witnesses {
        println!(
            "  exp(t X{})_* X{} at {:?}, t = {}: {}   (all t: {})",
            w.x_index,
            w.y_index,
            w.point,
            w.t,
            w.exact.as_deref().unwrap_or("-"),
            w.symbolic.as_deref().unwrap_or("-")
        );
    }
    Ok(())
}
