//! Zariski tangent spaces of a few singular sets.
//!
//! cargo run --example tangent_spaces

use stratlab::poly::{normal_form, Polynomial};
use stratlab::space::SpaceDef;
use stratlab::{qpoint, Result};

fn main() -> Result<()> {
    let lines = SpaceDef::parse(&["x", "y"], &["x^2*y - x*y^2"], &[])?;
    let axes = SpaceDef::parse(&["x", "y", "z"], &["x*y", "y*z", "x*z"], &[])?;
    let circle = SpaceDef::parse(&["x", "y"], &["x^2 + y^2 - 1"], &[])?;

    for (name, s, p) in [
        ("three lines", &lines, qpoint(&[0, 0])),
        ("three lines", &lines, qpoint(&[2, 2])),
        ("three axes", &axes, qpoint(&[0, 0, 0])),
        ("three axes", &axes, qpoint(&[0, 5, 0])),
        ("circle", &circle, qpoint(&[1, 0])),
    ] {
        let t = s.zariski_tangent(&p)?;
        println!("{name:<12} at {:?}: dim {}", stratlab::to_f64_point(&p), t.dim());
    }

    // ideal membership by normal form
    let v = lines.var_names();
    let f = Polynomial::parse("x^3*y - x^2*y^2", v)?;
    let nf = normal_form(&f, lines.equations())?;
    println!("x^3*y - x^2*y^2 mod the three-lines ideal: {} ({:?})", nf.remainder.to_string_with(v), nf.membership);
    Ok(())
}
