//! Fourier–Motzkin feasibility for homogeneous strict systems `aᵢ·c > 0`,
//! with an exact witness.

use crate::linalg::primitive_integer_vector;
use crate::Rational;

use num_traits::{One, Signed, Zero};

/// A point `c` with `row·c > 0` for every row, or `None` if the open cone
/// is empty.
pub(crate) fn strict_cone_witness(rows: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r[..d].to_vec()).collect();
    solve(rows, d)
}

fn solve(rows: Vec<Vec<Rational>>, d: usize) -> Option<Vec<Rational>> {
    if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
        return None;
    }
    if d == 0 {
        return Some(Vec::new());
    }
    let j = d - 1;
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in &rows {
        if r[j].is_positive() {
            pos.push(r);
        } else if r[j].is_negative() {
            neg.push(r);
        } else {
            rest.push(r[..j].to_vec());
        }
    }
    for p in &pos {
        for n in &neg {
            let comb: Vec<Rational> =
                (0..j).map(|k| -&n[j] * &p[k] + &p[j] * &n[k]).collect();
            rest.push(comb);
        }
    }
    let mut reduced: Vec<Vec<Rational>> = Vec::new();
    for r in rest {
        let r = if r.iter().all(Zero::is_zero) { r } else { positive_primitive(r) };
        if !reduced.contains(&r) {
            reduced.push(r);
        }
    }
    let mut c = solve(reduced, j)?;
    let bound = |r: &Vec<Rational>| -> Rational {
        let s: Rational = (0..j).map(|k| &r[k] * &c[k]).sum();
        -s / &r[j]
    };
    let lo = pos.iter().map(|r| bound(r)).max();
    let hi = neg.iter().map(|r| bound(r)).min();
    let two = Rational::from_integer(2.into());
    let v = match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some(l), None) => l + Rational::one(),
        (None, Some(h)) => h - Rational::one(),
        (Some(l), Some(h)) => (l + h) / two,
    };
    c.push(v);
    Some(c)
}

/// Primitive integer multiple of `r` by a positive factor.
fn positive_primitive(r: Vec<Rational>) -> Vec<Rational> {
    let lead_neg = r.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    let p = primitive_integer_vector(r);
    if lead_neg {
        p.into_iter().map(|c| -c).collect()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoint;

    fn check(rows: &[Vec<Rational>], c: &[Rational]) -> bool {
        rows.iter().all(|r| r.iter().zip(c).map(|(a, b)| a * b).sum::<Rational>().is_positive())
    }

    #[test]
    fn quadrants_and_diagonal() {
        for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let rows = vec![qpoint(&[sx, 0]), qpoint(&[0, sy])];
            let c = strict_cone_witness(&rows, 2).unwrap();
            assert!(check(&rows, &c));
        }
        // x > 0, y > 0, x - y > 0
        let rows = vec![qpoint(&[1, 0]), qpoint(&[0, 1]), qpoint(&[1, -1])];
        assert!(check(&rows, &strict_cone_witness(&rows, 2).unwrap()));
        // x > 0, -x > 0 is empty
        assert!(strict_cone_witness(&[qpoint(&[1, 0]), qpoint(&[-1, 0])], 2).is_none());
        // x - y > 0, y - z > 0, z - x > 0 is empty
        let cyc = vec![qpoint(&[1, -1, 0]), qpoint(&[0, 1, -1]), qpoint(&[-1, 0, 1])];
        assert!(strict_cone_witness(&cyc, 3).is_none());
        assert_eq!(strict_cone_witness(&[], 0), Some(vec![]));
    }
}
