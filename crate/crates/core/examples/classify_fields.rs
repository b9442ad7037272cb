//! Derivations that are vector fields and derivations that are not.
//!
//! cargo run --example classify_fields

use stratlab::fields::{classify, flow, is_admissible, ClassifyParams, Derivation, FlowParams};
use stratlab::poly::Polynomial;
use stratlab::space::{Inequality, Piece, SpaceDef};
use stratlab::Result;

fn main() -> Result<()> {
    let dx = Derivation::parse(&["1"], &["x".to_string()])?;
    let half = SpaceDef::parse(&["x"], &[], &["x >= 0"])?;
    let line = SpaceDef::parse(&["x"], &[], &[])?;
    let params = ClassifyParams::default();
    for (name, s) in [("half line", &half), ("line", &line)] {
        let r = classify(s, &dx, &[], &params)?;
        println!("d_x on the {name}: {:?} ({})", r.verdict, r.reason);
    }

    // an open disc tangent to the x-axis, plus the axis: not locally compact
    let v = vec!["x".to_string(), "y".to_string()];
    let disc = Piece { inequalities: vec![Inequality::parse("1 - x^2 - (y - 1)^2 > 0", &v)?], ..Piece::default() };
    let axis = Piece { equations: vec![Polynomial::parse("y", &v)?], ..Piece::default() };
    let sn = SpaceDef::euclidean(v).with_piece(disc)?.with_piece(axis)?;
    let r = classify(&sn, &Derivation::parse(&["1", "0"], sn.var_names())?, &[], &params)?;
    println!("d_x on disc plus line: {:?}", r.verdict);

    // the rotation is tangent to the circle; d_x is not
    let circle = SpaceDef::parse(&["x", "y"], &["x^2 + y^2 - 1"], &[])?;
    let rot = Derivation::parse_expr("-y*d_x + x*d_y", circle.var_names())?;
    let push = Derivation::parse_expr("d_x", circle.var_names())?;
    println!("rotation admissible on the circle: {:?}", is_admissible(&circle, &rot).verdict);
    println!("d_x admissible on the circle: {:?}", is_admissible(&circle, &push).verdict);

    let r = flow(&circle, &rot, &[1.0, 0.0], std::f64::consts::PI, &FlowParams::default())?;
    let e = r.endpoint();
    println!("flow of the rotation for time pi: ({:.9}, {:.9}), drift {:.1e}", e[0], e[1], r.drift_max);
    Ok(())
}
