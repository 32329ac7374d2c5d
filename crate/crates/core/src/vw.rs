//! Exact computation of `VW(n)`: the least prime `q ≡ 1 (mod n)` such that
//! every prime `p ≡ 1 (mod n)` with `p >= q` has a nontrivial solution of
//! `a x + b y = c z` inside its index-`n` subgroup.
//!
//! Every prime at or past [`guarantee_bound`] has a solution, so scanning up
//! to the first admissible prime past the bound and keeping the last
//! `false -> true` transition gives the exact value.

use num_bigint::BigUint;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, PrimeContext};
use crate::detect::{detect_fast, detect_naive, Coefficients};
use crate::error::{Error, Result};
use crate::sieve::primes_in_ap;
use crate::subgroup::Subgroup;

/// Whether the bound inequality holds at the integer `p`.
///
/// Trivial family (`a + b = c`): `(p - 1)^2 >= n^2 p (1 + sqrt p)`.
/// Otherwise: `(p - 1)^2 >= n^2 p^(3/2)`. Both sides are squared so the test
/// is exact.
pub fn bound_holds(p: u64, n: u64, trivial_family: bool) -> bool {
    if p < 2 {
        return false;
    }
    let p_big = BigUint::from(p);
    let n2 = BigUint::from(n) * BigUint::from(n);
    let lhs = {
        let d = BigUint::from(p - 1);
        &d * &d
    };
    let cube = &p_big * &p_big * &p_big;
    let rhs = &n2 * &n2 * cube;
    let slack = if trivial_family {
        let linear = &n2 * &p_big;
        if lhs < linear {
            return false;
        }
        lhs - linear
    } else {
        lhs
    };
    &slack * &slack >= rhs
}

/// Least integer `P` such that the bound inequality holds for every `p >= P`.
pub fn guarantee_bound(n: u64, coefficients: Coefficients) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("index n = {n} must be >= 2")));
    }
    let trivial = coefficients.is_trivial_family();
    let mut hi = 2u64;
    while !bound_holds(hi, n, trivial) {
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| Error::Domain(format!("bound for n = {n} overflows u64")))?;
    }
    let mut lo = hi / 2;
    // invariant: fails at lo (or lo < 2), holds at hi
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound_holds(mid, n, trivial) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// First prime `≡ 1 (mod n)` that is `>= from`.
pub fn first_prime_in_ap_from(n: u64, from: u64) -> Result<u64> {
    let mut x = if from <= 1 {
        1 + n
    } else {
        from + (n - (from - 1) % n) % n
    };
    loop {
        if is_prime(x) {
            return Ok(x);
        }
        x = x
            .checked_add(n)
            .ok_or_else(|| Error::Domain(format!("no prime ≡ 1 (mod {n}) below 2^64")))?;
    }
}

/// Which detector evaluates each prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    Fast,
    Naive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VwOptions {
    /// Scan up to this bound instead of the guarantee bound.
    pub bound_override: Option<u64>,
    pub workers: usize,
}

impl Default for VwOptions {
    fn default() -> Self {
        Self {
            bound_override: None,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VwResult {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    /// Last prime where detection switched from false to true. `None` only
    /// for uncertified scans that never saw a transition.
    pub p0: Option<u64>,
    pub guarantee_bound: u64,
    /// Largest prime scanned.
    pub scan_limit: u64,
    /// True when the scan reached the guarantee bound.
    pub certified: bool,
    pub primes_scanned: u64,
    pub exceptional_primes: Vec<u64>,
    /// Every `false -> true` transition, ascending. The last one is `p0`.
    pub transitions: Vec<u64>,
}

impl VwResult {
    pub fn coefficients(&self) -> Coefficients {
        Coefficients {
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }

    pub fn largest_exception(&self) -> Option<u64> {
        self.exceptional_primes.last().copied()
    }
}

/// Whether the index-`n` subgroup of `F_p^x` has a nontrivial solution.
pub fn prime_has_solution(
    p: u64,
    n: u64,
    coefficients: Coefficients,
    detector: Detector,
) -> Result<bool> {
    let sub = Subgroup::new(PrimeContext::new(p)?, n)?;
    let eq = coefficients.reduce(p)?;
    let outcome = match detector {
        Detector::Fast => detect_fast(&sub, &eq)?,
        Detector::Naive => detect_naive(&sub, &eq)?,
    };
    Ok(outcome.has_solution)
}

/// Primes considered for `n`: `p ≡ 1 (mod n)`, `p <= limit`, and `p` larger
/// than every coefficient.
pub fn scan_primes(n: u64, coefficients: Coefficients, limit: u64) -> Vec<u64> {
    let floor = coefficients.max();
    primes_in_ap(n, limit)
        .into_iter()
        .filter(|&p| p > floor)
        .collect()
}

/// Detection results for each prime, in the order given.
pub fn detection_sequence(
    primes: &[u64],
    n: u64,
    coefficients: Coefficients,
    detector: Detector,
    pool: Option<&ThreadPool>,
) -> Result<Vec<bool>> {
    let eval = |&p: &u64| prime_has_solution(p, n, coefficients, detector);
    match pool {
        Some(pool) => pool.install(|| primes.par_iter().with_max_len(1).map(eval).collect()),
        None => primes.iter().map(eval).collect(),
    }
}

/// Algorithm core: walk the booleans in order, recording each prime where
/// the previous value was false and the current one true.
pub fn transitions(primes: &[u64], has_solution: &[bool]) -> Vec<u64> {
    let mut prev = false;
    let mut out = Vec::new();
    for (&p, &cur) in primes.iter().zip(has_solution) {
        if cur && !prev {
            out.push(p);
        }
        prev = cur;
    }
    out
}

fn build_pool(workers: usize) -> Result<Option<ThreadPool>> {
    if workers == 0 {
        return Err(Error::Domain("worker count must be positive".into()));
    }
    if workers == 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map(Some)
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))
}

pub fn compute_vw(n: u64, coefficients: Coefficients, options: &VwOptions) -> Result<VwResult> {
    let pool = build_pool(options.workers)?;
    compute_vw_in(n, coefficients, options.bound_override, pool.as_ref())
}

fn compute_vw_in(
    n: u64,
    coefficients: Coefficients,
    bound_override: Option<u64>,
    pool: Option<&ThreadPool>,
) -> Result<VwResult> {
    let guarantee = guarantee_bound(n, coefficients)?;
    let target = bound_override.unwrap_or(guarantee);
    let scan_limit = first_prime_in_ap_from(n, target)?;
    let primes = scan_primes(n, coefficients, scan_limit);
    let Some(&last) = primes.last() else {
        return Err(Error::Domain(format!(
            "no admissible prime ≡ 1 (mod {n}) up to {scan_limit}"
        )));
    };
    let certified = last >= guarantee;
    let results = detection_sequence(&primes, n, coefficients, Detector::Fast, pool)?;
    if certified && !results.last().copied().unwrap_or(false) {
        return Err(Error::Consistency { n, p: last });
    }
    let transitions = transitions(&primes, &results);
    let exceptional_primes = primes
        .iter()
        .zip(&results)
        .filter(|(_, &ok)| !ok)
        .map(|(&p, _)| p)
        .collect();
    Ok(VwResult {
        n,
        a: coefficients.a,
        b: coefficients.b,
        c: coefficients.c,
        p0: transitions.last().copied(),
        guarantee_bound: guarantee,
        scan_limit: last,
        certified,
        primes_scanned: primes.len() as u64,
        exceptional_primes,
        transitions,
    })
}

/// Outcome for one index of a range scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeEntry {
    pub n: u64,
    pub result: Result<VwResult>,
}

/// `compute_vw` for every `n` in `[n_from, n_to]`, ordered by `n`. Per-index
/// failures are kept in their entry rather than aborting the range.
pub fn scan_range(
    n_from: u64,
    n_to: u64,
    coefficients: Coefficients,
    options: &VwOptions,
) -> Result<Vec<RangeEntry>> {
    if n_from < 2 || n_from > n_to {
        return Err(Error::Domain(format!(
            "need 2 <= from <= to, got from = {n_from}, to = {n_to}"
        )));
    }
    let pool = build_pool(options.workers)?;
    Ok((n_from..=n_to)
        .map(|n| RangeEntry {
            n,
            result: compute_vw_in(n, coefficients, options.bound_override, pool.as_ref()),
        })
        .collect())
}
