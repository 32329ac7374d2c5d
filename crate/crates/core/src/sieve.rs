//! Segmented sieves: all primes up to a limit, and the primes `≡ 1 (mod n)`
//! sieved directly along the progression `1 + k n`.

use crate::arith::{inv_mod, isqrt};

pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// Environment variable overriding the segment length (entries per segment).
pub const SEGMENT_SIZE_ENV: &str = "VWX_SEGMENT_SIZE";

/// Segment length, from `VWX_SEGMENT_SIZE` when set to a positive integer.
pub fn segment_size() -> usize {
    std::env::var(SEGMENT_SIZE_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&s| s > 0)
        .unwrap_or(DEFAULT_SEGMENT_SIZE)
}

/// Primes up to `limit` by an unsegmented odd-only sieve. Used for the base
/// primes of the segmented sieves.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = vec![2];
    for i in (3..=limit).step_by(2) {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        for j in (i * i..=limit).step_by(2 * i) {
            composite[j] = true;
        }
    }
    out
}

/// One window `[lo, hi)` of the plain sieve. After [`SieveSegment::sift`]
/// the unmarked odd values `>= 3` are exactly the odd primes in the window.
#[derive(Debug, Clone)]
pub struct SieveSegment {
    pub lo: u64,
    pub hi: u64,
    pub composite: Vec<bool>,
}

impl SieveSegment {
    pub fn new(lo: u64, hi: u64) -> Self {
        Self {
            lo,
            hi,
            composite: vec![false; (hi - lo) as usize],
        }
    }

    /// Marks odd multiples of the odd base primes.
    pub fn sift(&mut self, base: &[u64]) {
        for &q in base.iter().filter(|&&q| q > 2) {
            if q * q >= self.hi {
                break;
            }
            let mut m = (q * q).max(self.lo.div_ceil(q) * q);
            if m % 2 == 0 {
                m += q;
            }
            while m < self.hi {
                self.composite[(m - self.lo) as usize] = true;
                m += 2 * q;
            }
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.lo <= 2 && 2 < self.hi).then_some(2);
        let first_odd = (self.lo.max(3)) | 1;
        two.into_iter().chain(
            (first_odd..self.hi)
                .step_by(2)
                .filter(move |&v| !self.composite[(v - self.lo) as usize]),
        )
    }
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    primes_up_to_with(limit, segment_size())
}

pub fn primes_up_to_with(limit: u64, segment: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let base = small_primes(isqrt(limit));
    let mut out = Vec::new();
    let end = limit + 1;
    let mut lo = 0;
    while lo < end {
        let hi = (lo + segment as u64).min(end);
        let mut seg = SieveSegment::new(lo, hi);
        seg.sift(&base);
        out.extend(seg.primes());
        lo = hi;
    }
    out
}

/// Primes `p <= limit` with `p ≡ 1 (mod n)`, ascending. The sieve runs over
/// the progression index `k` of `1 + k n`, so memory is proportional to the
/// segment size and not to `limit`.
pub fn primes_in_ap(n: u64, limit: u64) -> Vec<u64> {
    primes_in_ap_with(n, limit, segment_size())
}

pub fn primes_in_ap_with(n: u64, limit: u64, segment: usize) -> Vec<u64> {
    assert!(n >= 1, "modulus of the progression must be positive");
    if limit < 2 {
        return Vec::new();
    }
    let k_end = (limit - 1) / n + 1;
    let base = small_primes(isqrt(limit));
    // first k with 1 + k n ≡ 0 (mod q), for each q not dividing n
    let starts: Vec<(u64, u64)> = base
        .iter()
        .filter(|&&q| n % q != 0)
        .map(|&q| {
            let inv = inv_mod(n % q, q).expect("q does not divide n");
            (q, (q - inv) % q)
        })
        .collect();

    let mut out = Vec::new();
    let mut composite = vec![false; segment.min(k_end as usize)];
    let mut k_lo = 0;
    while k_lo < k_end {
        let k_hi = (k_lo + segment as u64).min(k_end);
        let width = (k_hi - k_lo) as usize;
        composite[..width].fill(false);
        for &(q, k0) in &starts {
            let mut k = if k_lo <= k0 {
                k0
            } else {
                k0 + (k_lo - k0).div_ceil(q) * q
            };
            // q itself may lie on the progression
            if 1 + k * n == q {
                k += q;
            }
            while k < k_hi {
                composite[(k - k_lo) as usize] = true;
                k += q;
            }
        }
        out.extend(
            (k_lo..k_hi)
                .filter(|&k| k > 0 && !composite[(k - k_lo) as usize])
                .map(|k| 1 + k * n),
        );
        k_lo = k_hi;
    }
    out
}

/// Sum of the primes `p <= limit` with `p ≡ 1 (mod n)`.
pub fn prime_sum_in_ap(n: u64, limit: u64) -> u128 {
    primes_in_ap(n, limit).into_iter().map(u128::from).sum()
}

/// Euler's totient from the factorization of `n`.
pub fn totient(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let factors = crate::arith::factorize(n).expect("n >= 2");
    crate::arith::distinct(&factors)
        .into_iter()
        .fold(n, |acc, q| acc / q * (q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(limit: u64) -> Vec<u64> {
        (2..=limit)
            .filter(|&x| (2..).take_while(|d| d * d <= x).all(|d| x % d != 0))
            .collect()
    }

    /// Full-array sieve of Eratosthenes, independent of the segmented code.
    fn full_sieve(limit: usize) -> Vec<bool> {
        let mut is_p = vec![true; limit + 1];
        is_p[0] = false;
        if limit >= 1 {
            is_p[1] = false;
        }
        let mut i = 2;
        while i * i <= limit {
            if is_p[i] {
                let mut j = i * i;
                while j <= limit {
                    is_p[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is_p
    }

    #[test]
    fn examples() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn prime_counts_at_checkpoints() {
        let full = full_sieve(10_000_000);
        assert_eq!(full.iter().take(1_000_001).filter(|&&b| b).count(), 78_498);
        assert_eq!(full.iter().filter(|&&b| b).count(), 664_579);
        assert_eq!(primes_up_to(10_000_000).len(), 664_579);
    }

    #[test]
    fn agrees_with_trial_division() {
        let want = trial_division_primes(100_000);
        assert_eq!(primes_up_to(100_000), want);
        // tiny segments exercise the window boundaries
        assert_eq!(primes_up_to_with(100_000, 97), want);
        assert_eq!(primes_up_to_with(100_000, 2), want);
    }

    #[test]
    fn ap_examples() {
        assert_eq!(
            primes_in_ap(4, 100),
            vec![5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97]
        );
        assert_eq!(primes_in_ap(2, 10), vec![3, 5, 7]);
        assert_eq!(primes_in_ap(100, 100), Vec::<u64>::new());
        assert_eq!(primes_in_ap(100, 101), vec![101]);
        assert_eq!(primes_in_ap(1, 30), trial_division_primes(30));
    }

    #[test]
    fn ap_agrees_with_filtered_sieve() {
        let limit = 1_000_000;
        let full = full_sieve(limit);
        for n in (2..=40).chain([97, 210, 1000, 4096]) {
            let want: Vec<u64> = (0..=limit)
                .filter(|&x| full[x] && x as u64 % n == 1)
                .map(|x| x as u64)
                .collect();
            assert_eq!(primes_in_ap(n, limit as u64), want, "n = {n}");
            assert_eq!(primes_in_ap_with(n, limit as u64, 1000), want, "n = {n}");
        }
        for limit in [2u64, 3, 10, 11, 12, 99, 100, 101, 5000] {
            for n in 2..12 {
                let want: Vec<u64> = (0..=limit as usize)
                    .filter(|&x| full[x] && x as u64 % n == 1)
                    .map(|x| x as u64)
                    .collect();
                assert_eq!(primes_in_ap_with(n, limit, 7), want, "n = {n}, limit = {limit}");
            }
        }
    }

    #[test]
    fn prime_sums() {
        assert_eq!(prime_sum_in_ap(4, 100), 515);
        assert_eq!(prime_sum_in_ap(2, 10), 15);
        assert_eq!(prime_sum_in_ap(10, 100), 215);
    }

    #[test]
    fn prime_sum_tracks_asymptotic() {
        let limit = 1_000_000u64;
        let x = limit as f64;
        for n in 2..=20 {
            let sum = prime_sum_in_ap(n, limit) as f64;
            let predicted = x * x / (totient(n) as f64 * x.ln());
            let ratio = sum / predicted;
            assert!((0.5..=2.0).contains(&ratio), "n = {n}, ratio = {ratio}");
        }
    }

    #[test]
    fn totients() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(16), 8);
        assert_eq!(totient(97), 96);
    }
}
