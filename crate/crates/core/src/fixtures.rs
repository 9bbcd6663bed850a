//! Named boxes and inequalities that recur throughout tests, docs and the
//! CLI: deterministic boxes, the PR box, the CHSH functional and the
//! three-party worked example pair.

use num_traits::Zero;

use crate::rational::{rat, rat_int};
use crate::tensor::{entry_count, index_word, CorrelationTensor, FunctionalTensor};
use crate::Result;

/// The PR box: `x^{s1 s2} = F^{s1 s2}`, maximal CHSH violation.
pub fn pr_box() -> CorrelationTensor {
    CorrelationTensor::from_sparse(
        2,
        &[
            (&[-1, -1], rat_int(1)),
            (&[-1, 1], rat_int(1)),
            (&[1, -1], rat_int(1)),
            (&[1, 1], rat_int(-1)),
            (&[0, 0], rat_int(1)),
        ],
    )
    .expect("static")
}

/// PR box with every correlator negated (outcome flips connect the two).
pub fn anti_pr_box() -> CorrelationTensor {
    CorrelationTensor::from_sparse(
        2,
        &[
            (&[-1, -1], rat_int(-1)),
            (&[-1, 1], rat_int(-1)),
            (&[1, -1], rat_int(-1)),
            (&[1, 1], rat_int(1)),
            (&[0, 0], rat_int(1)),
        ],
    )
    .expect("static")
}

/// Deterministic strategy from per-party signs: entry at word `s` is the
/// product of `a_j^{s_j}` with `a_j^0 = 1`.
pub fn deterministic_box(a_minus: &[i8], a_plus: &[i8]) -> Result<CorrelationTensor> {
    let n = a_minus.len();
    if a_plus.len() != n {
        return Err(crate::Error::DimensionMismatch { expected: n, got: a_plus.len() });
    }
    let mut entries = Vec::with_capacity(entry_count(n));
    for idx in 0..entry_count(n) {
        let word = index_word(n, idx);
        let mut sign = 1i8;
        for (j, &l) in word.iter().enumerate() {
            sign *= match l {
                -1 => a_minus[j],
                0 => 1,
                _ => a_plus[j],
            };
        }
        entries.push(rat_int(sign as i64));
    }
    CorrelationTensor::new(n, entries)
}

/// All 4^n deterministic strategies, in canonical entry order.
pub fn deterministic_boxes(n: usize) -> Result<Vec<CorrelationTensor>> {
    crate::tensor::check_party_count(n)?;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for mask in 0..(1u32 << (2 * n)) {
        let a_minus: Vec<i8> =
            (0..n).map(|j| if mask >> j & 1 == 0 { 1 } else { -1 }).collect();
        let a_plus: Vec<i8> =
            (0..n).map(|j| if mask >> (n + j) & 1 == 0 { 1 } else { -1 }).collect();
        out.push(deterministic_box(&a_minus, &a_plus)?);
    }
    Ok(out)
}

/// The deterministic box with every observable reading +1: all entries 1.
pub fn all_ones_box(n: usize) -> Result<CorrelationTensor> {
    deterministic_box(&vec![1; n], &vec![1; n])
}

/// Pure noise: normalization 1, every correlator 0.
pub fn noise_box(n: usize) -> Result<CorrelationTensor> {
    CorrelationTensor::from_sparse(n, &[(&vec![0i8; n][..], rat_int(1))])
}

/// CHSH in homogeneous `>= 0` form: coefficients F_{s1 s2}; it is what
/// lowering the PR box produces.
pub fn chsh_functional() -> FunctionalTensor {
    FunctionalTensor::from_sparse(
        2,
        &[
            (&[-1, -1], rat(1, 2)),
            (&[-1, 1], rat(1, 2)),
            (&[1, -1], rat(1, 2)),
            (&[1, 1], rat(-1, 2)),
            (&[0, 0], rat_int(1)),
        ],
    )
    .expect("static")
}

/// CHSH with the four correlator signs flipped; evaluates to -1 on the PR
/// box, certifying its nonlocality.
pub fn sign_flipped_chsh_functional() -> FunctionalTensor {
    FunctionalTensor::from_sparse(
        2,
        &[
            (&[-1, -1], rat(-1, 2)),
            (&[-1, 1], rat(-1, 2)),
            (&[1, -1], rat(-1, 2)),
            (&[1, 1], rat(1, 2)),
            (&[0, 0], rat_int(1)),
        ],
    )
    .expect("static")
}

/// The two-party positivity inequality `x^{-1,-1}+x^{-1,0}+x^{0,-1}+x^{0,0} >= 0`,
/// which is what lowering the all-ones box produces.
pub fn positivity_functional_2() -> FunctionalTensor {
    FunctionalTensor::from_sparse(
        2,
        &[
            (&[-1, -1], rat_int(1)),
            (&[-1, 0], rat_int(1)),
            (&[0, -1], rat_int(1)),
            (&[0, 0], rat_int(1)),
        ],
    )
    .expect("static")
}

/// A three-party facet Bell inequality, normalized so the inhomogeneous
/// form has right-hand side 1 and homogenized with `+x^{000}`. Observable
/// indices map as 1 -> setting -1, 2 -> setting +1. Raising it produces
/// [`sliwa17_box`] entrywise.
pub fn sliwa17_functional() -> FunctionalTensor {
    FunctionalTensor::from_sparse(
        3,
        &[
            (&[0, 0, 0], rat_int(1)),
            (&[-1, 0, 0], rat(1, 4)),
            (&[1, 0, 0], rat(1, 4)),
            (&[-1, -1, 0], rat(1, 4)),
            (&[1, -1, 0], rat(1, 4)),
            (&[-1, 0, -1], rat(1, 4)),
            (&[1, 0, -1], rat(1, 4)),
            (&[-1, -1, -1], rat(-1, 4)),
            (&[1, -1, -1], rat(-1, 4)),
            (&[-1, 1, 1], rat(1, 2)),
            (&[1, 1, 1], rat(-1, 2)),
        ],
    )
    .expect("static")
}

/// The no-signaling box dual to [`sliwa17_functional`].
pub fn sliwa17_box() -> CorrelationTensor {
    CorrelationTensor::from_sparse(
        3,
        &[
            (&[0, 0, 0], rat_int(1)),
            (&[-1, 0, 0], rat(1, 2)),
            (&[-1, -1, 0], rat(1, 2)),
            (&[-1, 1, 0], rat(1, 2)),
            (&[-1, 0, -1], rat(1, 2)),
            (&[-1, 0, 1], rat(1, 2)),
            (&[-1, -1, -1], rat(-1, 2)),
            (&[-1, -1, 1], rat(-1, 2)),
            (&[-1, 1, -1], rat(-1, 2)),
            (&[-1, 1, 1], rat(-1, 2)),
            (&[1, -1, -1], rat_int(1)),
            (&[1, -1, 1], rat_int(-1)),
            (&[1, 1, -1], rat_int(-1)),
            (&[1, 1, 1], rat_int(1)),
        ],
    )
    .expect("static")
}

/// True when every entry vanishes except possibly full-correlator words and
/// the all-zero word.
pub fn is_full_correlation_supported(x: &CorrelationTensor) -> bool {
    let n = x.n();
    (0..entry_count(n)).all(|idx| {
        let word = index_word(n, idx);
        let full = word.iter().all(|&l| l != 0);
        let zero_word = word.iter().all(|&l| l == 0);
        full || zero_word || x.entries()[idx].is_zero()
    })
}
