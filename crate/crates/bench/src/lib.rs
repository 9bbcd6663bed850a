//! Shared inputs for the criterion benchmarks.

use bellcone_core::rational::{rat, Rational};
use bellcone_core::tensor::{entry_count, CorrelationTensor};

/// A dense box with small mixed-denominator entries, deterministic in `n`.
pub fn dense_box(n: usize) -> CorrelationTensor {
    let entries: Vec<Rational> = (0..entry_count(n))
        .map(|i| {
            let num = (i as i64 * 7 + 3) % 11 - 5;
            let den = (i as i64 % 4) + 1;
            rat(num, den)
        })
        .collect();
    CorrelationTensor::new(n, entries).expect("shape by construction")
}
