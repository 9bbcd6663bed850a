//! Exact conic-combination feasibility by phase-1 simplex with Bland's
//! rule. Decides whether a target vector is a nonnegative combination of
//! generators; the answer is always certified, either by the combination
//! coefficients or by a separating functional.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cone::linalg::dot_rational_int;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub enum Conic {
    Member { coefficients: Vec<Rational> },
    NotMember { separator: Vec<Rational> },
}

/// Solves `sum_j lambda_j g_j = target, lambda >= 0`.
#[allow(clippy::needless_range_loop, clippy::while_let_loop)] // tableau indexing
pub fn conic_membership(generators: &[Vec<BigInt>], target: &[BigInt]) -> Conic {
    let d = target.len();
    let m = generators.len();

    // Row-normalize so the artificial basis starts feasible: multiply row i
    // by -1 whenever target_i < 0.
    let signs: Vec<i8> = target
        .iter()
        .map(|x| if x.is_negative() { -1 } else { 1 })
        .collect();

    // Tableau: columns 0..m are lambda, m..m+d artificial; one extra rhs.
    let ncols = m + d;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(d);
    let mut rhs: Vec<Rational> = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = vec![Rational::zero(); ncols];
        for (j, g) in generators.iter().enumerate() {
            let mut v = Rational::from_integer(g[i].clone());
            if signs[i] < 0 {
                v = -v;
            }
            row[j] = v;
        }
        row[m + i] = Rational::from_integer(BigInt::from(1));
        rows.push(row);
        let mut b = Rational::from_integer(target[i].clone());
        if signs[i] < 0 {
            b = -b;
        }
        rhs.push(b);
    }
    let mut basis: Vec<usize> = (m..m + d).collect();

    // Objective: minimize the sum of artificials. obj[j] holds the reduced
    // cost c_j - y.A_j; starting basis is the artificials, so obj[j] =
    // c_j - sum_i rows[i][j].
    let mut obj = vec![Rational::zero(); ncols];
    for (j, o) in obj.iter_mut().enumerate() {
        let c = if j < m { Rational::zero() } else { Rational::from_integer(BigInt::from(1)) };
        let mut acc = c;
        for row in &rows {
            acc -= &row[j];
        }
        *o = acc;
    }
    let mut obj_value: Rational = rhs.iter().sum();

    loop {
        // Bland: entering column with the lowest index among negative
        // reduced costs.
        let Some(enter) = (0..ncols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test; ties broken by the lowest basis variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..d {
            if rows[i][enter].is_positive() {
                let ratio = &rhs[i] / &rows[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // Unbounded phase-1 objective cannot happen (costs bounded below
            // by 0), so a missing pivot row means the entering column is
            // nonpositive throughout; with Bland this is unreachable.
            unreachable!("phase-1 simplex found no pivot row");
        };

        // Pivot.
        let pivot = rows[leave][enter].clone();
        let inv = pivot.recip();
        for v in rows[leave].iter_mut() {
            *v = &*v * &inv;
        }
        rhs[leave] = &rhs[leave] * &inv;
        for i in 0..d {
            if i != leave && !rows[i][enter].is_zero() {
                let factor = rows[i][enter].clone();
                for j in 0..ncols {
                    let v = &rows[i][j] - &factor * &rows[leave][j];
                    rows[i][j] = v;
                }
                let v = &rhs[i] - &factor * &rhs[leave];
                rhs[i] = v;
            }
        }
        if !obj[enter].is_zero() {
            let factor = obj[enter].clone();
            for j in 0..ncols {
                let v = &obj[j] - &factor * &rows[leave][j];
                obj[j] = v;
            }
            // entering variable moves by rhs[leave]; objective changes at
            // rate factor
            let v = &obj_value + &factor * &rhs[leave];
            obj_value = v;
        }
        basis[leave] = enter;
    }

    if obj_value.is_zero() {
        let mut coefficients = vec![Rational::zero(); m];
        for i in 0..d {
            if basis[i] < m {
                coefficients[basis[i]] = rhs[i].clone();
            }
        }
        debug_assert!(combination_matches(generators, &coefficients, target));
        Conic::Member { coefficients }
    } else {
        // Dual values off the artificial columns: y'_i = 1 - obj[m+i] in the
        // normalized system; undo the row normalization and negate so the
        // certificate g satisfies g.gen >= 0 for all generators, g.target < 0.
        let separator: Vec<Rational> = (0..d)
            .map(|i| {
                let y = Rational::from_integer(BigInt::from(1)) - &obj[m + i];
                let y = if signs[i] < 0 { -y } else { y };
                -y
            })
            .collect();
        for g in generators {
            debug_assert!(!dot_rational_int(&separator, g).is_negative());
        }
        debug_assert!(dot_rational_int(&separator, target).is_negative());
        Conic::NotMember { separator }
    }
}

fn combination_matches(
    generators: &[Vec<BigInt>],
    coefficients: &[Rational],
    target: &[BigInt],
) -> bool {
    (0..target.len()).all(|i| {
        let mut acc = Rational::zero();
        for (c, g) in coefficients.iter().zip(generators) {
            if !c.is_zero() {
                acc += c * Rational::from_integer(g[i].clone());
            }
        }
        acc == Rational::from_integer(target[i].clone())
    })
}
