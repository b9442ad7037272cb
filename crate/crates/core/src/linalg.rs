//! Exact rational and integer linear algebra, plus the few floating-point
//! kernels used by flows and rank estimates.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Row-echelon data from fraction-free elimination.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Integer rows of the echelon form (first `pivots.len()` rows are nonzero).
    pub rows: Vec<Vec<BigInt>>,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter()
                .map(|r| (r * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Fraction-free Bareiss elimination of a rational matrix. Each row is first
/// scaled to integers, which leaves the row space unchanged.
pub fn bareiss(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
    let mut m = integer_rows(rows);
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..nrows {
            for j in (c + 1)..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: m, pivots, ncols }
}

/// Exact rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss(rows, ncols).pivots.len()
}

/// Basis of the right kernel `{v : A v = 0}`.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let e = bareiss(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (k, &pc) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[k];
                let mut s = Rational::zero();
                for j in (pc + 1)..ncols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        s += Rational::from_integer(row[j].clone()) * &x[j];
                    }
                }
                x[pc] = -s / Rational::from_integer(row[pc].clone());
            }
            primitive_integer_vector(x)
        })
        .collect()
}

/// Scales a rational vector to coprime integer entries with a positive
/// leading nonzero entry.
pub fn primitive_integer_vector(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| Rational::from_integer(x / &g * &sign)).collect()
}

/// Greedy basis: the subsequence of `vectors` that increases the rank.
pub fn independent_subset(vectors: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for v in vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&trial, dim) > basis.len() {
            basis = trial;
        }
    }
    basis
}

/// Exact membership of `v` in the row span of `span`.
pub fn in_span(span: &[Vec<Rational>], v: &[Rational]) -> bool {
    let dim = v.len();
    let r = rank(span, dim);
    let mut with = span.to_vec();
    with.push(v.to_vec());
    rank(&with, dim) == r
}

/// Sparse exact solve of `A x = b`, where each row of `A` is a map from
/// column to coefficient. Returns one solution (free variables zero) or
/// `None` when inconsistent.
pub fn solve_sparse(
    rows: Vec<BTreeMap<usize, Rational>>,
    rhs: Vec<Rational>,
    ncols: usize,
) -> Option<Vec<Rational>> {
    let mut rows: Vec<(BTreeMap<usize, Rational>, Rational)> = rows.into_iter().zip(rhs).collect();
    let mut pivot_rows: Vec<(usize, BTreeMap<usize, Rational>, Rational)> = Vec::new();
    // Eliminate column by column, choosing the sparsest pivot row.
    let mut active: Vec<usize> = (0..rows.len()).collect();
    loop {
        active.retain(|&i| !rows[i].0.is_empty());
        if rows.iter().any(|(r, b)| r.is_empty() && !b.is_zero()) {
            return None;
        }
        if active.is_empty() {
            break;
        }
        let &pi = active
            .iter()
            .min_by_key(|&&i| (rows[i].0.len(), *rows[i].0.keys().next().expect("nonempty")))
            .expect("active rows");
        let (prow, pb) = rows[pi].clone();
        let (&pc, pv) = prow.iter().next().map(|(c, v)| (c, v.clone())).expect("nonempty");
        let prow: BTreeMap<usize, Rational> = prow.into_iter().map(|(c, v)| (c, v / &pv)).collect();
        let pb = pb / &pv;
        rows[pi] = (BTreeMap::new(), Rational::zero());
        for &i in &active {
            if i == pi {
                continue;
            }
            let Some(f) = rows[i].0.get(&pc).cloned() else { continue };
            let (row, b) = &mut rows[i];
            for (c, v) in &prow {
                let entry = row.entry(*c).or_insert_with(Rational::zero);
                *entry -= &f * v;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            *b -= &f * &pb;
        }
        pivot_rows.push((pc, prow, pb));
        active.retain(|&i| i != pi);
    }
    let mut x = vec![Rational::zero(); ncols];
    for (pc, row, b) in pivot_rows.iter().rev() {
        let mut s = b.clone();
        for (c, v) in row {
            if c != pc && !x[*c].is_zero() {
                s -= v * &x[*c];
            }
        }
        x[*pc] = s;
    }
    Some(x)
}

/// Dense exact inverse, `None` for singular input.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let pv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v /= &pv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[c].clone();
                for (v, pvj) in a[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * pvj;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// floating point

fn to_dmatrix(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

/// Numeric rank: singular values above `tol · max(1, σ_max)`.
pub fn numeric_rank(rows: &[Vec<f64>], ncols: usize, tol: f64) -> usize {
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    let sv = to_dmatrix(rows, ncols).singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Distance from `v` to the span of `span` (least squares residual norm).
pub fn span_residual(span: &[Vec<f64>], v: &[f64]) -> f64 {
    let n = v.len();
    let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if span.is_empty() {
        return vnorm;
    }
    // columns = span vectors
    let a = DMatrix::from_fn(n, span.len(), |i, j| span[j][i]);
    let b = nalgebra::DVector::from_column_slice(v);
    let svd = a.clone().svd(true, true);
    let x = match svd.solve(&b, 1e-12) {
        Ok(x) => x,
        Err(_) => return vnorm,
    };
    (a * x - b).norm()
}

/// Minimum-norm least-squares step `J⁺ r` for the Newton projection.
pub fn pseudo_inverse_apply(jac: &[Vec<f64>], ncols: usize, r: &[f64]) -> Vec<f64> {
    if jac.is_empty() {
        return vec![0.0; ncols];
    }
    let a = to_dmatrix(jac, ncols);
    let b = nalgebra::DVector::from_column_slice(r);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    match svd.solve(&b, 1e-10 * smax.max(1e-300)) {
        Ok(x) => x.iter().cloned().collect(),
        Err(_) => vec![0.0; ncols],
    }
}

// ---------------------------------------------------------------------------
// integer lattices (character lattices of tori)

/// Row-style Hermite normal form of an integer matrix; zero rows dropped.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let &p = nz.iter().min_by_key(|&&i| m[i][c].abs()).expect("nonempty");
            m.swap(r, p);
            let mut done = true;
            for i in (r + 1)..m.len() {
                if m[i][c] != 0 {
                    let f = m[i][c] / m[r][c];
                    for j in 0..ncols {
                        m[i][j] -= f * m[r][j];
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for v in m[r].iter_mut() {
                *v = -*v;
            }
        }
        for i in 0..r {
            let f = m[i][c].div_euclid(m[r][c]);
            if f != 0 {
                for j in 0..ncols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|&v| v != 0));
    m
}

/// Whether `v` lies in the ℤ-span of the rows of a Hermite normal form.
pub fn lattice_contains(hnf: &[Vec<i64>], v: &[i64]) -> bool {
    let mut rest = v.to_vec();
    for row in hnf {
        let Some(c) = row.iter().position(|&x| x != 0) else { continue };
        if rest[c] % row[c] != 0 {
            return false;
        }
        let f = rest[c] / row[c];
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= f * y;
        }
    }
    rest.iter().all(|&x| x == 0)
}

/// Order of the torsion subgroup of `ℤⁿ / L` where `L` is spanned by `rows`:
/// the gcd of the maximal nonvanishing minors.
pub fn torsion_order(rows: &[Vec<i64>]) -> u64 {
    let ncols = rows.first().map_or(0, Vec::len);
    let rq: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    let k = rank(&rq, ncols);
    if k == 0 {
        return 1;
    }
    let mut g = BigInt::zero();
    for rs in subsets(rows.len(), k) {
        for cs in subsets(ncols, k) {
            let minor: Vec<Vec<Rational>> =
                rs.iter().map(|&i| cs.iter().map(|&j| rq[i][j].clone()).collect()).collect();
            g = g.gcd(&determinant(&minor).to_integer());
        }
    }
    g.try_into().unwrap_or(u64::MAX)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact determinant of a square rational matrix.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det *= &pv;
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pv;
            let pivot_row = a[c].clone();
            for (v, pj) in a[i].iter_mut().zip(&pivot_row) {
                *v -= &f * pj;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qf};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel(&mat(&[&[2, 0]]), 2);
        assert_eq!(k, vec![vec![q(0), q(1)]]);
        let k = kernel(&mat(&[&[1, 2, 3], &[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(&v[0] + q(2) * &v[1] + q(3) * &v[2], q(0));
        }
    }

    #[test]
    fn kernel_of_empty_matrix_is_everything() {
        assert_eq!(kernel(&[], 3).len(), 3);
        assert_eq!(kernel(&mat(&[&[0, 0, 0]]), 3).len(), 3);
    }

    #[test]
    fn bareiss_rank_with_fractions() {
        let m = vec![vec![qf(1, 2), qf(1, 3)], vec![qf(3, 2), q(1)]];
        assert_eq!(rank(&m, 2), 1);
    }

    #[test]
    fn sparse_solve() {
        let rows = vec![
            BTreeMap::from([(0, q(1)), (1, q(1))]),
            BTreeMap::from([(0, q(1)), (1, q(-1))]),
        ];
        let x = solve_sparse(rows, vec![q(3), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let rows = vec![BTreeMap::from([(0, q(1))]), BTreeMap::from([(0, q(2))])];
        assert!(solve_sparse(rows, vec![q(1), q(3)], 1).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[0, 1], &[-1, 0]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn lattices() {
        let h = hermite_normal_form(&[vec![2, 4], vec![1, 1]]);
        assert!(lattice_contains(&h, &[1, 1]));
        assert!(lattice_contains(&h, &[0, 2]));
        assert!(!lattice_contains(&h, &[0, 1]));
        assert_eq!(torsion_order(&[vec![2, 0], vec![0, 3]]), 6);
        assert_eq!(torsion_order(&[vec![1, -1]]), 1);
        assert_eq!(torsion_order(&[vec![2]]), 2);
    }

    #[test]
    fn numeric_kernels() {
        assert_eq!(numeric_rank(&[vec![1.0, 0.0], vec![2.0, 1e-12]], 2, 1e-8), 1);
        assert!(span_residual(&[vec![1.0, 0.0]], &[3.0, 0.0]) < 1e-12);
        assert!((span_residual(&[vec![1.0, 0.0]], &[1.0, 1.0]) - 1.0).abs() < 1e-12);
    }
}
