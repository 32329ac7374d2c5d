//! The index-`n` subgroup `H` of `F_p^x`, i.e. the `n`-th power residues.

use crate::arith::{distinct, mul_mod, pow_mod, PrimeContext};
use crate::error::{Error, Result};

/// Primes up to this size get a dense membership bitset (16 MiB at the limit).
pub const DENSE_TABLE_MAX_P: u64 = 1 << 27;

/// How membership queries are answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// One bit per residue in `[0, p)`.
    DenseTable,
    /// `x^m == 1 (mod p)` where `m = |H|`.
    PowerTest,
}

impl Strategy {
    pub fn for_modulus(p: u64) -> Self {
        if p <= DENSE_TABLE_MAX_P {
            Strategy::DenseTable
        } else {
            Strategy::PowerTest
        }
    }
}

#[derive(Debug, Clone)]
enum Membership {
    Dense(Vec<u64>),
    PowerTest,
}

#[derive(Debug, Clone)]
pub struct Subgroup {
    ctx: PrimeContext,
    index: u64,
    order: u64,
    generator: u64,
    membership: Membership,
}

impl Subgroup {
    /// Builds the subgroup of index `n`, picking the membership strategy by size of `p`.
    pub fn new(ctx: PrimeContext, n: u64) -> Result<Self> {
        let strategy = Strategy::for_modulus(ctx.p());
        Self::with_strategy(ctx, n, strategy)
    }

    pub fn with_strategy(ctx: PrimeContext, n: u64, strategy: Strategy) -> Result<Self> {
        let p = ctx.p();
        if n < 1 {
            return Err(Error::Domain("subgroup index must be >= 1".into()));
        }
        if (p - 1) % n != 0 {
            return Err(Error::Index { n, p });
        }
        let order = (p - 1) / n;
        let generator = pow_mod(ctx.g(), n, p);
        let mut sub = Subgroup {
            ctx,
            index: n,
            order,
            generator,
            membership: Membership::PowerTest,
        };
        if strategy == Strategy::DenseTable {
            let mut bits = vec![0u64; (p as usize).div_ceil(64)];
            for h in sub.elements() {
                bits[(h >> 6) as usize] |= 1 << (h & 63);
            }
            sub.membership = Membership::Dense(bits);
        }
        Ok(sub)
    }

    pub fn context(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// Index `n = [F_p^x : H]`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// `|H| = (p - 1) / n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `g^n`, where `g` is the least primitive root.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn strategy(&self) -> Strategy {
        match self.membership {
            Membership::Dense(_) => Strategy::DenseTable,
            Membership::PowerTest => Strategy::PowerTest,
        }
    }

    /// Density `|H| / p`.
    pub fn density(&self) -> f64 {
        self.order as f64 / self.p() as f64
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        let p = self.p();
        if x == 0 || x >= p {
            return false;
        }
        match &self.membership {
            Membership::Dense(bits) => bits[(x >> 6) as usize] >> (x & 63) & 1 == 1,
            Membership::PowerTest => pow_mod(x, self.order, p) == 1,
        }
    }

    /// The dense membership bitset, if this subgroup has one.
    pub(crate) fn dense_bits(&self) -> Option<&[u64]> {
        match &self.membership {
            Membership::Dense(bits) => Some(bits),
            Membership::PowerTest => None,
        }
    }

    /// `gen^0, gen^1, ..., gen^(m-1)` by repeated multiplication.
    pub fn elements(&self) -> Elements {
        Elements {
            p: self.p(),
            generator: self.generator,
            current: 1,
            remaining: self.order,
        }
    }

    /// True when the generator has exact order `|H|`.
    pub fn generator_has_exact_order(&self) -> bool {
        let p = self.p();
        let m = self.order;
        if pow_mod(self.generator, m, p) != 1 {
            return false;
        }
        if m == 1 {
            return true;
        }
        let mut m_factors: Vec<u64> = self.ctx.factors_p_minus_1().to_vec();
        // remove the factors of n to get those of m
        let mut rest = self.index;
        m_factors.retain(|&q| {
            if rest % q == 0 {
                rest /= q;
                false
            } else {
                true
            }
        });
        distinct(&m_factors)
            .iter()
            .all(|&q| pow_mod(self.generator, m / q, p) != 1)
    }
}

#[derive(Debug, Clone)]
pub struct Elements {
    p: u64,
    generator: u64,
    current: u64,
    remaining: u64,
}

impl Iterator for Elements {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let h = self.current;
        self.current = mul_mod(self.current, self.generator, self.p);
        Some(h)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Elements {}
