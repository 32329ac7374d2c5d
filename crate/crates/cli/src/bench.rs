//! Median-of-k wall-clock comparison of the quadratic and linear detectors
//! on one subgroup.

use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use vwx_core::detect::{count_solutions, detect_fast, detect_naive, COUNT_MAX_ORDER};
use vwx_core::{Equation, Result, Subgroup};

/// The quadratic leg is skipped above this subgroup order.
pub const NAIVE_MAX_ORDER: u64 = 100_000;

pub const MIN_REPETITIONS: usize = 5;

/// Runs `f` `reps` times and returns the median duration in nanoseconds.
pub fn median_ns<T>(reps: usize, mut f: impl FnMut() -> T) -> u64 {
    let mut samples: Vec<u64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed().as_nanos() as u64
        })
        .collect();
    samples.sort_unstable();
    samples[samples.len() / 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub p: u64,
    pub n: u64,
    pub order: u64,
    pub repetitions: usize,
    /// Median time of the quadratic detector; absent when skipped.
    pub naive_ns: Option<u64>,
    /// Median time of the linear detector, which stops at the first witness.
    pub fast_ns: u64,
    /// Median time of one complete linear pass over `H` with no early exit.
    pub full_pass_ns: Option<u64>,
    pub speedup: Option<f64>,
    pub full_pass_speedup: Option<f64>,
    pub naive_skipped: bool,
}

pub fn run(sub: &Subgroup, eq: &Equation, reps: usize) -> Result<BenchReport> {
    let reps = reps.max(MIN_REPETITIONS);
    // surface domain errors before timing
    let fast_outcome = detect_fast(sub, eq)?;
    let naive_skipped = sub.order() > NAIVE_MAX_ORDER;
    let naive_ns = if naive_skipped {
        None
    } else {
        let mut agrees = true;
        let t = median_ns(reps, || {
            let o = detect_naive(sub, eq);
            agrees &= o.as_ref().is_ok_and(|o| o.has_solution == fast_outcome.has_solution);
        });
        assert!(agrees, "detectors disagree at p = {}, n = {}", sub.p(), sub.index());
        Some(t)
    };
    let fast_ns = median_ns(reps, || detect_fast(sub, eq)).max(1);
    let full_pass_ns = (sub.order() <= COUNT_MAX_ORDER)
        .then(|| median_ns(reps, || count_solutions(sub, eq)).max(1));
    Ok(BenchReport {
        p: sub.p(),
        n: sub.index(),
        order: sub.order(),
        repetitions: reps,
        naive_ns,
        fast_ns,
        full_pass_ns,
        speedup: naive_ns.map(|t| t as f64 / fast_ns as f64),
        full_pass_speedup: naive_ns.zip(full_pass_ns).map(|(t, f)| t as f64 / f as f64),
        naive_skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_samples() {
        let mut calls = 0;
        let t = median_ns(7, || {
            calls += 1;
        });
        assert_eq!(calls, 7);
        assert!(t < 1_000_000_000);
    }
}
