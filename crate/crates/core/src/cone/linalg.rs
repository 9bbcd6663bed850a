//! Exact linear algebra over integers and rationals: fraction-free rank,
//! kernels and small inverses. Matrices here are tiny (at most a few dozen
//! rows), so simple dense elimination is the right tool.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
/// Avoids rational arithmetic and keeps intermediate entries small.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let Some(pivot_row) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, pivot_row);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the pivot columns.
#[allow(clippy::needless_range_loop)] // row/column indices mirror the pivot algebra
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (row..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot_row);
        let inv = m[row][col].recip();
        for j in col..ncols {
            let v = &m[row][j] * &inv;
            m[row][j] = v;
        }
        for i in 0..nrows {
            if i != row && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..ncols {
                    let v = &m[i][j] - &factor * &m[row][j];
                    m[i][j] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    pivots
}

/// Basis of `{ x : rows * x = 0 }` for an integer matrix with `dim` columns.
pub fn integer_kernel_basis(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    if m.is_empty() {
        m.push(vec![Rational::zero(); dim]);
    }
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); dim];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Greedily selects row indices forming a basis of the row space. Returns
/// `None` if the rows do not span a space of dimension `dim`.
pub fn greedy_independent_rows(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<usize>> {
    let mut selected = Vec::new();
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v: Vec<Rational> =
            row.iter().map(|x| Rational::from_integer(x.clone())).collect();
        // reduce against current echelon
        for e in &echelon {
            let lead = e.iter().position(|x| !x.is_zero()).expect("echelon rows nonzero");
            if !v[lead].is_zero() {
                let factor = &v[lead] / &e[lead];
                for j in 0..dim {
                    let u = &v[j] - &factor * &e[j];
                    v[j] = u;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            echelon.push(v);
            echelon.sort_by_key(|e| e.iter().position(|x| !x.is_zero()).unwrap());
            selected.push(idx);
            if selected.len() == dim {
                return Some(selected);
            }
        }
    }
    None
}

/// Inverse of a square rational matrix given as integer rows, or `None` if
/// singular. Result is returned column-by-column.
pub fn invert_columns(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<Rational>>> {
    let d = rows.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut row: Vec<Rational> =
                r.iter().map(|x| Rational::from_integer(x.clone())).collect();
            row.resize(2 * d, Rational::zero());
            row
        })
        .collect();
    for (i, row) in m.iter_mut().enumerate() {
        row[d + i] = Rational::one();
    }
    let pivots = rref(&mut m);
    if pivots.len() < d || pivots[d - 1] >= d {
        return None;
    }
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        cols.push((0..d).map(|i| m[i][d + j].clone()).collect());
    }
    Some(cols)
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn dot_rational_int(a: &[Rational], b: &[BigInt]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * Rational::from_integer(y.clone());
        }
    }
    acc
}

/// Sign of `a . b` without keeping the value.
pub fn dot_sign(a: &[BigInt], b: &[BigInt]) -> i8 {
    let d = dot(a, b);
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(bareiss_rank(&[bi(&[1, 0]), bi(&[0, 1])]), 2);
        assert_eq!(bareiss_rank(&[bi(&[1, 2]), bi(&[2, 4])]), 1);
        assert_eq!(bareiss_rank(&[bi(&[0, 0])]), 0);
        assert_eq!(
            bareiss_rank(&[bi(&[2, 3, 5]), bi(&[4, 6, 10]), bi(&[1, 1, 1])]),
            2
        );
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let rows = vec![bi(&[1, 1, 0]), bi(&[0, 0, 1])];
        let k = integer_kernel_basis(&rows, 3);
        assert_eq!(k.len(), 1);
        for v in &k {
            for row in &rows {
                assert!(dot_rational_int(v, row).is_zero());
            }
        }
        assert!(integer_kernel_basis(&[bi(&[1, 0]), bi(&[0, 1])], 2).is_empty());
    }

    #[test]
    fn inverse_diagonalizes() {
        let rows = vec![bi(&[2, 1]), bi(&[1, 1])];
        let cols = invert_columns(&rows).unwrap();
        // rows * col_j = e_j
        for (j, col) in cols.iter().enumerate() {
            for (i, row) in rows.iter().enumerate() {
                let v = dot_rational_int(col, row);
                let expected =
                    if i == j { Rational::one() } else { Rational::zero() };
                assert_eq!(v, expected);
            }
        }
        assert!(invert_columns(&[bi(&[1, 2]), bi(&[2, 4])]).is_none());
    }

    #[test]
    fn greedy_rows_span() {
        let rows = vec![bi(&[1, 1, 1]), bi(&[2, 2, 2]), bi(&[0, 1, 0]), bi(&[0, 0, 3])];
        let sel = greedy_independent_rows(&rows, 3).unwrap();
        assert_eq!(sel, vec![0, 2, 3]);
        assert!(greedy_independent_rows(&rows[..2], 3).is_none());
    }
}
