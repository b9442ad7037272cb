//! Basic forms on the plane under x -> -x and their descent to the cone.
//!
//! cargo run --example basic_forms

use stratlab::actions::{FiniteGroup, GroupAction, HilbertMap};
use stratlab::forms::{find_descent_witness, is_basic, DescentOutcome, DifferentialForm, PolyMap};
use stratlab::poly::Polynomial;
use stratlab::space::SpaceDef;
use stratlab::Result;

fn main() -> Result<()> {
    let plane = SpaceDef::euclidean(vec!["x".into(), "y".into()]);
    let v = plane.var_names();
    let t = ["s", "t", "u"].map(String::from).to_vec();
    let hm = HilbertMap::new(
        ["x^2 - y^2", "2*x*y", "x^2 + y^2"].iter().map(|p| Polynomial::parse(p, v)).collect::<Result<_>>()?,
        t.clone(),
        vec![Polynomial::parse("s^2 + t^2 - u^2", &t)?],
        vec![],
    )?;
    let z2 = GroupAction::Finite(FiniteGroup::antipodal(2));
    let pi = PolyMap::from(&hm);

    let sigma = DifferentialForm::parse("1/(4*u) ds^dt", &t, Some(2))?;
    println!("pullback of {} is {}", sigma.to_string_with(&t), pi.pullback(&sigma)?.to_string_with(v));

    for src in ["dx^dy", "x dx + y dy", "x dy - y dx", "x^2 + 3*y^2", "dx"] {
        let alpha = DifferentialForm::parse(src, v, None)?;
        if !is_basic(&z2, &alpha, &plane)? {
            println!("{src:<14} not basic");
            continue;
        }
        match find_descent_witness(&z2, &hm, &alpha, None)? {
            (DescentOutcome::Witness(beta), _) => {
                let back = pi.pullback(&beta)?;
                println!("{src:<14} = pullback of {}  (check: {})", beta.to_string_with(&t), back == alpha);
            }
            (DescentOutcome::Exhausted { bound }, _) => println!("{src:<14} no witness up to degree {bound}"),
        }
    }

    let a = DifferentialForm::parse("x*y dx", v, Some(1))?;
    let b = DifferentialForm::parse("y^2 dy", v, Some(1))?;
    println!("d({}) = {}", a.to_string_with(v), a.exterior_d().to_string_with(v));
    println!("({}) ^ ({}) = {}", a.to_string_with(v), b.to_string_with(v), a.wedge(&b)?.to_string_with(v));
    Ok(())
}
