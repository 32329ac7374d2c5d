//! Modular arithmetic, primality, factorization and primitive roots for
//! moduli below 2^62.
//!
//! Products are formed in 128-bit intermediates, except when the modulus fits
//! in 32 bits and the plain 64-bit product cannot overflow.

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeContext`].
pub const MAX_MODULUS: u64 = 1 << 62;

/// Trial division handles every prime factor below this; rho takes over after.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 && a < m && b < m {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `base^exp mod m` by square-and-multiply. Requires `m >= 2`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m >= 2);
    let mut base = base % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

// Strong-pseudoprime witnesses; the first twelve primes are a deterministic
// set for every n < 3.3 * 10^24, which covers u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test over the whole `u64` range.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if x == q {
            return true;
        }
        if x % q == 0 {
            return false;
        }
    }
    let mut d = x - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut y = pow_mod(a, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mul_mod(y, y, x);
            if y == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization with multiplicity, ascending.
pub fn factorize(m: u64) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(Error::Domain(format!("cannot factorize {m}; need m >= 2")));
    }
    let mut factors = Vec::new();
    let mut rest = m;
    while rest % 2 == 0 {
        factors.push(2);
        rest /= 2;
    }
    let mut q = 3;
    while q < TRIAL_DIVISION_LIMIT && q * q <= rest {
        while rest % q == 0 {
            factors.push(q);
            rest /= q;
        }
        q += 2;
    }
    if rest > 1 {
        split_large(rest, &mut factors);
    }
    factors.sort_unstable();
    Ok(factors)
}

/// Splits a cofactor with no prime factor below the trial-division limit.
fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime(m) {
        out.push(m);
        return;
    }
    let d = find_divisor(m);
    split_large(d, out);
    split_large(m / d, out);
}

/// Nontrivial divisor of an odd composite `m`. Runs Brent's variant of rho
/// with increasing polynomial constants; the sequence is fully deterministic.
fn find_divisor(m: u64) -> u64 {
    if let Some(r) = exact_sqrt(m) {
        return r;
    }
    for c in 1.. {
        if let Some(d) = brent_rho(m, c) {
            return d;
        }
    }
    unreachable!("rho exhausted every polynomial constant")
}

fn exact_sqrt(m: u64) -> Option<u64> {
    let r = isqrt(m);
    (r * r == m).then_some(r)
}

/// Floor of the square root.
pub fn isqrt(m: u64) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > m) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |sq| sq <= m) {
        r += 1;
    }
    r
}

fn brent_rho(m: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| add_mod(mul_mod(x, x, m), c % m, m);
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), m);
            }
            g = gcd(q, m);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 40 {
            return None;
        }
    }
    if g == m {
        // the batch overshot; walk it one step at a time
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), m);
            if g > 1 {
                break;
            }
        }
    }
    (g != m).then_some(g)
}

/// Sorted distinct primes from a factor multiset.
pub fn distinct(factors: &[u64]) -> Vec<u64> {
    let mut v = factors.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Least primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    Ok(PrimeContext::new(p)?.g)
}

fn least_primitive_root(p: u64, primes_of_p_minus_1: &[u64]) -> u64 {
    (2..p)
        .find(|&g| {
            primes_of_p_minus_1
                .iter()
                .all(|&q| pow_mod(g, (p - 1) / q, p) != 1)
        })
        .expect("every prime has a primitive root")
}

/// An odd prime modulus together with its least primitive root and the
/// factorization of `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    g: u64,
    factors_p_minus_1: Vec<u64>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 {
            return Err(Error::Domain(format!("modulus {p} must be an odd prime >= 3")));
        }
        if p >= MAX_MODULUS {
            return Err(Error::Domain(format!("modulus {p} exceeds 2^62")));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors_p_minus_1 = factorize(p - 1)?;
        let g = least_primitive_root(p, &distinct(&factors_p_minus_1));
        Ok(Self {
            p,
            g,
            factors_p_minus_1,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Least primitive root.
    pub fn g(&self) -> u64 {
        self.g
    }

    /// Prime factors of `p - 1` with multiplicity, ascending.
    pub fn factors_p_minus_1(&self) -> &[u64] {
        &self.factors_p_minus_1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_division(x: u64) -> bool {
        x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(341));
        // strong pseudoprimes to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(is_prime((1 << 61) - 1));
    }

    #[test]
    fn primality_matches_trial_division_below_100k() {
        for x in 0..100_000 {
            assert_eq!(is_prime(x), trial_division(x), "x = {x}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap(), vec![2, 2, 3]);
        assert_eq!(factorize(13).unwrap(), vec![13]);
        assert_eq!(factorize(100).unwrap(), vec![2, 2, 5, 5]);
        assert!(matches!(factorize(1), Err(Error::Domain(_))));
        assert!(matches!(factorize(0), Err(Error::Domain(_))));
    }

    #[test]
    fn factorize_needs_rho() {
        // both factors above the trial-division limit
        let (a, b) = (1_000_003u64, 2_147_483_647u64);
        assert_eq!(factorize(a * b).unwrap(), vec![a, b]);
        assert_eq!(factorize(a * a).unwrap(), vec![a, a]);
        let c = 4_294_967_291u64;
        assert_eq!(factorize(c * 1_000_033).unwrap(), vec![1_000_033, c]);
    }

    #[test]
    fn pow_mod_examples() {
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod(5, 0, 7), 1);
        assert_eq!(pow_mod(3, 6, 7), 1);
        let m = (1u64 << 61) - 1;
        assert_eq!(pow_mod(3, m - 1, m), 1);
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(11).unwrap(), 2);
        assert!(matches!(primitive_root(2), Err(Error::Domain(_))));
        assert!(matches!(primitive_root(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn primitive_roots_have_full_order_below_10k() {
        for p in (3..10_000).filter(|&p| is_prime(p)) {
            let ctx = PrimeContext::new(p).unwrap();
            let g = ctx.g();
            assert!(1 < g && g < p);
            assert_eq!(pow_mod(g, p - 1, p), 1);
            assert_eq!(ctx.factors_p_minus_1().iter().product::<u64>(), p - 1);
            for q in distinct(ctx.factors_p_minus_1()) {
                assert_ne!(pow_mod(g, (p - 1) / q, p), 1, "p = {p}, q = {q}");
            }
            // least: every smaller candidate has a proper order
            for h in 2..g {
                let order = (1..p).find(|&k| pow_mod(h, k, p) == 1).unwrap();
                assert!(order < p - 1);
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for m in [7u64, 11, 1_000_003] {
            for a in (1..50).filter(|a| a % m != 0) {
                let inv = inv_mod(a, m).unwrap();
                assert_eq!(mul_mod(a, inv, m), 1);
            }
        }
        assert_eq!(inv_mod(4, 8), None);
    }

    proptest! {
        #[test]
        fn prime_test_agrees_with_trial_division(x in 0u64..(1 << 32)) {
            prop_assert_eq!(is_prime(x), trial_division(x));
        }

        #[test]
        fn factorize_inverts_product(idx in proptest::collection::vec(0usize..2000, 1..12)) {
            let primes: Vec<u64> = (2..20_000u64).filter(|&q| is_prime(q)).collect();
            let mut chosen = Vec::new();
            let mut product: u64 = 1;
            for i in idx {
                let q = primes[i];
                match product.checked_mul(q) {
                    Some(v) if v < 1 << 50 => { product = v; chosen.push(q); }
                    _ => break,
                }
            }
            prop_assume!(product >= 2);
            chosen.sort_unstable();
            prop_assert_eq!(factorize(product).unwrap(), chosen);
        }

        #[test]
        fn factorize_large_semiprimes(a in 1_000_000u64..3_000_000, b in 1_000_000u64..3_000_000) {
            let a = (a..).find(|&x| is_prime(x)).unwrap();
            let b = (b..).find(|&x| is_prime(x)).unwrap();
            let mut want = vec![a, b];
            want.sort_unstable();
            prop_assert_eq!(factorize(a * b).unwrap(), want);
        }
    }
}
