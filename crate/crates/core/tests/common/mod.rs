//! Shared test support: an independent extreme-ray oracle and a small
//! deterministic PRNG. The oracle enumerates rays by facet saturation, with
//! its own elimination code, so it shares no algorithmic path with the
//! double-description engine it cross-checks.
#![allow(dead_code)] // each integration test uses its own subset
#![allow(clippy::needless_range_loop)] // pivot algebra indexing

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use bellcone_core::rational::Rational;

/// Extreme rays of `{ x : g.x >= 0 }` by exhaustive saturation search:
/// every extreme ray is the one-dimensional kernel of some (dim-1)-subset
/// of constraints, signed to satisfy the rest.
pub fn brute_force_rays(constraints: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let k = dim - 1;
    if constraints.len() < k {
        return found;
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let rows: Vec<&Vec<BigInt>> = subset.iter().map(|&i| &constraints[i]).collect();
        if let Some(v) = kernel_if_line(&rows, dim) {
            for candidate in [negate(&v), v] {
                if satisfies_all(constraints, &candidate) {
                    found.push(candidate);
                }
            }
        }
        // next k-combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                found.sort();
                found.dedup();
                return found;
            }
            i -= 1;
            if subset[i] != i + constraints.len() - k {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn negate(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

fn satisfies_all(constraints: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    constraints.iter().all(|g| {
        let mut acc = BigInt::zero();
        for (a, b) in g.iter().zip(v) {
            acc += a * b;
        }
        !acc.is_negative()
    })
}

/// Kernel of the rows, provided it is exactly one-dimensional; returned as
/// a primitive integer vector. Plain rational Gauss-Jordan, written here
/// independently of the library's linear algebra.
fn kernel_if_line(rows: &[&Vec<BigInt>], dim: usize) -> Option<Vec<BigInt>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..nrows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for j in 0..dim {
            let v = &m[row][j] * &inv;
            m[row][j] = v;
        }
        for i in 0..nrows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..dim {
                    let v = &m[i][j] - &f * &m[row][j];
                    m[i][j] = v;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if pivot_cols.len() != dim - 1 {
        return None;
    }
    let free = (0..dim).find(|c| !pivot_cols.contains(c)).expect("one free column");
    let mut v = vec![Rational::zero(); dim];
    v[free] = Rational::from_integer(BigInt::from(1));
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    bellcone_core::rational::primitive_integer_vector(&v)
}

/// xorshift64*; deterministic across platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Nonnegative rational with numerator 0..=num_max, denominator
    /// 1..=den_max.
    pub fn small_nonneg(&mut self, num_max: u64, den_max: u64) -> Rational {
        let n = self.below(num_max + 1) as i64;
        let d = (self.below(den_max) + 1) as i64;
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Rational in [-1, 1] with denominator 1..=den_max.
    pub fn unit_interval_signed(&mut self, den_max: u64) -> Rational {
        let d = (self.below(den_max) + 1) as i64;
        let n = self.below(2 * d as u64 + 1) as i64 - d;
        Rational::new(BigInt::from(n), BigInt::from(d))
    }
}
