//! Momentum maps of circle actions, their zero levels and reduced strata.
//!
//! cargo run --example momentum_maps

use stratlab::actions::{GroupAction, TorusAction};
use stratlab::hamiltonian::{
    derive_momentum_map, hamiltonian_vector_field, poisson_bracket, reduced_strata, zero_level, SymplecticForm,
};
use stratlab::poly::{Polynomial, RationalFunction};
use stratlab::{qpoint, Result};

fn main() -> Result<()> {
    for (w1, w2) in [(1, 1), (1, -1), (1, 2)] {
        let names = ["x1", "y1", "x2", "y2"].map(String::from).to_vec();
        let g = GroupAction::Torus(TorusAction::new(4, 1, vec![(0, 1), (2, 3)], vec![vec![w1], vec![w2]])?);
        let omega = SymplecticForm::standard(4)?;
        let phi = derive_momentum_map(&g, &omega)?;
        println!("weights ({w1}, {w2}): Phi = {}", phi.strings(&names).join(", "));
        println!("  xi _| omega + d Phi = 0: {:?}", phi.verify(&omega)?);

        let z = zero_level(&g, &phi, names.clone())?;
        let eqs: Vec<String> = z.equations().iter().map(|e| e.to_string_with(&names)).collect();
        println!("  zero level: {}", if eqs.is_empty() { "everything".into() } else { eqs.join(" = 0, ") + " = 0" });
        let p = qpoint(&[1, 0, 1, 0]);
        if z.contains(&p)? {
            println!("  tangent dim at (1, 0, 1, 0): {}", z.zariski_tangent(&p)?.dim());
        }
        let red = reduced_strata(&g, &z, None)?;
        let dims: Vec<usize> = red.stratification.strata.iter().map(|s| s.dim).collect();
        println!("  strata of the zero level: dims {dims:?}");
    }

    let names = ["q", "p"].map(String::from).to_vec();
    let omega = SymplecticForm::standard(2)?;
    let h = Polynomial::parse("p^2/2 + q^4", &names)?;
    println!("X_H for H = {}: {}", h.to_string_with(&names), hamiltonian_vector_field(&omega, &h)?.to_string_with(&names));
    let q = RationalFunction::from(Polynomial::parse("q", &names)?);
    let p = RationalFunction::from(Polynomial::parse("p", &names)?);
    println!("{{q, p}} = {}", poisson_bracket(&omega, &q, &p)?.to_string_with(&names));
    Ok(())
}
