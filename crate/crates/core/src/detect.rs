//! Detection of nontrivial solutions to `a x + b y = c z` with `x, y, z` in a
//! multiplicative subgroup `H`.
//!
//! The fast path uses the normalization `z = 1`: a solution exists iff
//! `(c - aH) ∩ bH` is nonempty, which takes `|H|` membership tests. When
//! `a + b = c (mod p)` every `(h, h, h)` is a solution, and those are removed
//! by dropping `1` from both sides of the intersection.

use serde::{Deserialize, Serialize};

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::subgroup::Subgroup;

/// Upper bound on `|H|` for exact solution counting.
pub const COUNT_MAX_ORDER: u64 = 100_000;

/// Integer coefficients of `a x + b y = c z`, before reduction modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Coefficients {
    /// `x + y = 2z`, the three-term progression equation.
    pub const PROGRESSION: Coefficients = Coefficients { a: 1, b: 1, c: 2 };

    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::Domain(format!(
                "coefficients must be positive, got ({a}, {b}, {c})"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// `a + b = c` over the integers.
    pub fn is_trivial_family(&self) -> bool {
        self.a.checked_add(self.b) == Some(self.c)
    }

    pub fn max(&self) -> u64 {
        self.a.max(self.b).max(self.c)
    }

    /// Reduces modulo `p`. Requires `p` to exceed every coefficient.
    pub fn reduce(&self, p: u64) -> Result<Equation> {
        if p <= self.max() {
            return Err(Error::Domain(format!(
                "modulus {p} must exceed every coefficient of ({}, {}, {})",
                self.a, self.b, self.c
            )));
        }
        Equation::new(self.a, self.b, self.c, p)
    }
}

impl Default for Coefficients {
    fn default() -> Self {
        Self::PROGRESSION
    }
}

/// `a x + b y = c z` over `F_p`, coefficients stored as nonzero residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equation {
    p: u64,
    a: u64,
    b: u64,
    c: u64,
    trivial_family: bool,
}

impl Equation {
    pub fn new(a: u64, b: u64, c: u64, p: u64) -> Result<Self> {
        let (a, b, c) = (a % p, b % p, c % p);
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::Domain(format!(
                "coefficients ({a}, {b}, {c}) must be nonzero modulo {p}"
            )));
        }
        Ok(Self {
            p,
            a,
            b,
            c,
            trivial_family: add_mod(a, b, p) == c,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coefficients(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c)
    }

    /// Whether `a + b = c (mod p)`, i.e. every `(h, h, h)` is a solution.
    pub fn trivial_family(&self) -> bool {
        self.trivial_family
    }

    pub fn is_satisfied_by(&self, w: Witness) -> bool {
        let p = self.p;
        add_mod(mul_mod(self.a, w.x, p), mul_mod(self.b, w.y, p), p) == mul_mod(self.c, w.z, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl Witness {
    pub fn is_trivial(&self) -> bool {
        self.x == self.y && self.y == self.z
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionOutcome {
    pub has_solution: bool,
    pub witness: Option<Witness>,
}

impl DetectionOutcome {
    fn from_witness(witness: Option<Witness>) -> Self {
        Self {
            has_solution: witness.is_some(),
            witness,
        }
    }
}

fn check_moduli(sub: &Subgroup, eq: &Equation) -> Result<()> {
    if sub.p() != eq.p() {
        return Err(Error::Domain(format!(
            "equation is over F_{} but subgroup lives in F_{}",
            eq.p(),
            sub.p()
        )));
    }
    Ok(())
}

fn assert_sound(sub: &Subgroup, eq: &Equation, w: Witness) {
    assert!(
        eq.is_satisfied_by(w)
            && !w.is_trivial()
            && sub.contains(w.x)
            && sub.contains(w.y)
            && sub.contains(w.z),
        "unsound witness {w:?} for {eq:?}"
    );
}

/// Linear-time detection through `(c - aH) ∩ bH`. Returns the first witness
/// in enumeration order, normalized to `z = 1`.
pub fn detect_fast(sub: &Subgroup, eq: &Equation) -> Result<DetectionOutcome> {
    check_moduli(sub, eq)?;
    let p = sub.p();
    let (a, b, c) = eq.coefficients();
    let b_inv = inv_mod(b, p).expect("nonzero residue mod prime is invertible");
    let trivial = eq.trivial_family();

    let witness = sub
        .elements()
        .filter(|&x| !(trivial && x == 1))
        .find_map(|x| {
            let y = mul_mod(b_inv, sub_mod(c, mul_mod(a, x, p), p), p);
            (sub.contains(y) && !(trivial && y == 1)).then_some(Witness { x, y, z: 1 })
        });
    if let Some(w) = witness {
        assert_sound(sub, eq, w);
    }
    Ok(DetectionOutcome::from_witness(witness))
}

/// Full pass over all pairs `(x, y)` in `H^2`, solving for `z`. This evaluates
/// the whole of `(aH + bH) ∩ cH` with no early exit, so its cost is always
/// `|H|^2`. Returns the first nontrivial solution and the number of them.
fn scan_pairs(sub: &Subgroup, eq: &Equation) -> (Option<Witness>, u64) {
    let p = sub.p();
    let (a, b, c) = eq.coefficients();
    let c_inv = inv_mod(c, p).expect("nonzero residue mod prime is invertible");
    // z = (a/c) x + (b/c) y
    let ac = mul_mod(a, c_inv, p);
    let bc = mul_mod(b, c_inv, p);
    let elems: Vec<u64> = sub.elements().collect();
    let xs: Vec<u64> = elems.iter().map(|&x| mul_mod(ac, x, p)).collect();
    let ys: Vec<u64> = elems.iter().map(|&y| mul_mod(bc, y, p)).collect();
    let trivial = eq.trivial_family();

    let mut first = None;
    let mut hits = 0u64;
    let owned_bits;
    let bits: &[u64] = match sub.dense_bits() {
        Some(b) => b,
        None => {
            let mut b = vec![0u64; (p as usize).div_ceil(64)];
            for &h in &elems {
                b[(h >> 6) as usize] |= 1 << (h & 63);
            }
            owned_bits = b;
            &owned_bits
        }
    };
    for (i, &sx) in xs.iter().enumerate() {
        let mut row_hits = 0u64;
        for &sy in &ys {
            // sx, sy < p, so one conditional subtraction reduces the sum
            let s = sx + sy;
            let z = if s >= p { s - p } else { s };
            row_hits += (bits[(z >> 6) as usize] >> (z & 63)) & 1;
        }
        // with x = y, z = x exactly in the trivial family
        if trivial {
            row_hits -= 1;
        }
        if row_hits > 0 && first.is_none() {
            first = ys.iter().enumerate().find_map(|(j, &sy)| {
                let z = add_mod(sx, sy, p);
                (sub.contains(z) && !(trivial && i == j)).then(|| Witness {
                    x: elems[i],
                    y: elems[j],
                    z,
                })
            });
        }
        hits += row_hits;
    }
    (first, hits)
}

/// Quadratic reference detector over all pairs in `H^2`.
pub fn detect_naive(sub: &Subgroup, eq: &Equation) -> Result<DetectionOutcome> {
    check_moduli(sub, eq)?;
    let (witness, _) = scan_pairs(sub, eq);
    if let Some(w) = witness {
        assert_sound(sub, eq, w);
    }
    Ok(DetectionOutcome::from_witness(witness))
}

/// Number of triples `(x, y, z)` in `H^3` with `a x + b y = c z`, trivial ones
/// included. Every solution is a `z`-multiple of a unique solution with
/// `z = 1`, so this is `|H|` times the size of `(c - aH) ∩ bH`.
pub fn count_solutions(sub: &Subgroup, eq: &Equation) -> Result<u64> {
    check_moduli(sub, eq)?;
    if sub.order() > COUNT_MAX_ORDER {
        return Err(Error::Resource(format!(
            "|H| = {} exceeds the counting limit {COUNT_MAX_ORDER}",
            sub.order()
        )));
    }
    let p = sub.p();
    let (a, b, c) = eq.coefficients();
    let b_inv = inv_mod(b, p).expect("nonzero residue mod prime is invertible");
    let normalized = sub
        .elements()
        .filter(|&u| sub.contains(mul_mod(b_inv, sub_mod(c, mul_mod(a, u, p), p), p)))
        .count() as u64;
    Ok(sub.order() * normalized)
}

/// Same count as [`count_solutions`], by the quadratic pair scan.
pub fn count_solutions_naive(sub: &Subgroup, eq: &Equation) -> Result<u64> {
    check_moduli(sub, eq)?;
    let (_, nontrivial) = scan_pairs(sub, eq);
    let trivial = if eq.trivial_family() { sub.order() } else { 0 };
    Ok(nontrivial + trivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_prime, pow_mod, PrimeContext};

    fn sub(p: u64, n: u64) -> Subgroup {
        Subgroup::new(PrimeContext::new(p).unwrap(), n).unwrap()
    }

    fn eq(a: u64, b: u64, c: u64, p: u64) -> Equation {
        Equation::new(a, b, c, p).unwrap()
    }

    /// Triple loop over H^3 with membership by the power test.
    fn brute_force(p: u64, n: u64, a: u64, b: u64, c: u64) -> (u64, bool) {
        let m = (p - 1) / n;
        let h: Vec<u64> = (1..p).filter(|&x| pow_mod(x, m, p) == 1).collect();
        let mut total = 0;
        let mut nontrivial = false;
        for &x in &h {
            for &y in &h {
                for &z in &h {
                    if (a * x + b * y) % p == (c * z) % p {
                        total += 1;
                        nontrivial |= !(x == y && y == z);
                    }
                }
            }
        }
        (total, nontrivial)
    }

    #[test]
    fn fast_examples() {
        let o = detect_fast(&sub(7, 2), &eq(1, 1, 2, 7)).unwrap();
        assert!(!o.has_solution && o.witness.is_none());

        let o = detect_fast(&sub(11, 2), &eq(1, 1, 2, 11)).unwrap();
        let w = o.witness.unwrap();
        assert!(o.has_solution);
        assert_eq!(w.z, 1);
        assert!(eq(1, 1, 2, 11).is_satisfied_by(w));

        // 1 + 2 = 3 * 1 (mod 7); not the trivial family so x = 1 is allowed
        let o = detect_fast(&sub(7, 2), &eq(1, 1, 3, 7)).unwrap();
        assert_eq!(o.witness, Some(Witness { x: 1, y: 2, z: 1 }));
    }

    #[test]
    fn naive_examples() {
        let o = detect_naive(&sub(13, 2), &eq(1, 1, 2, 13)).unwrap();
        assert!(o.has_solution);
        assert!(eq(1, 1, 2, 13).is_satisfied_by(o.witness.unwrap()));
        assert!(!detect_naive(&sub(7, 6), &eq(1, 1, 2, 7)).unwrap().has_solution);
        // p = 2n + 1 gives H = {1, -1}
        for n in [3u64, 5, 6, 9, 11] {
            let p = 2 * n + 1;
            assert!(is_prime(p));
            assert!(!detect_naive(&sub(p, n), &eq(1, 1, 2, p)).unwrap().has_solution);
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_solutions(&sub(7, 2), &eq(1, 1, 2, 7)).unwrap(), 3);
        assert_eq!(count_solutions(&sub(7, 6), &eq(1, 1, 2, 7)).unwrap(), 1);
        assert_eq!(count_solutions(&sub(7, 6), &eq(2, 3, 5, 7)).unwrap(), 1);
        let n11 = count_solutions(&sub(11, 2), &eq(1, 1, 2, 11)).unwrap();
        assert!(n11 >= 15);
        assert_eq!(n11, brute_force(11, 2, 1, 1, 2).0);
    }

    #[test]
    fn zero_coefficient_rejected() {
        assert!(matches!(Equation::new(7, 1, 2, 7), Err(Error::Domain(_))));
        assert!(matches!(Coefficients::new(0, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(
            Coefficients::new(1, 1, 7).unwrap().reduce(7),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mismatched_modulus_rejected() {
        assert!(detect_fast(&sub(11, 2), &eq(1, 1, 2, 13)).is_err());
    }

    #[test]
    fn trivial_family_is_modular() {
        assert!(eq(1, 1, 2, 7).trivial_family());
        assert!(!eq(1, 1, 3, 7).trivial_family());
        // 6 + 6 = 12 = 1 (mod 11)
        assert!(eq(6, 6, 1, 11).trivial_family());
        assert!(!Coefficients::new(6, 6, 1).unwrap().is_trivial_family());
    }

    #[test]
    fn agrees_with_brute_force_small() {
        for p in (5..120).filter(|&p| is_prime(p)) {
            for n in (2..p - 1).filter(|n| (p - 1) % n == 0) {
                let h = sub(p, n);
                for (a, b, c) in [(1, 1, 2), (1, 2, 3), (2, 1, 1), (1, 1, 1), (3, 2, 1)] {
                    let e = eq(a, b, c, p);
                    let (total, nontrivial) = brute_force(p, n, a, b, c);
                    assert_eq!(count_solutions(&h, &e).unwrap(), total);
                    assert_eq!(count_solutions_naive(&h, &e).unwrap(), total);
                    assert_eq!(detect_fast(&h, &e).unwrap().has_solution, nontrivial);
                    assert_eq!(detect_naive(&h, &e).unwrap().has_solution, nontrivial);
                }
            }
        }
    }

    #[test]
    fn oracle_equivalence_and_invariants_below_1000() {
        for p in (5..1000).filter(|&p| is_prime(p)) {
            let ctx = PrimeContext::new(p).unwrap();
            for n in (2..p - 1).filter(|n| (p - 1) % n == 0) {
                let h = Subgroup::new(ctx.clone(), n).unwrap();
                let elems: Vec<u64> = h.elements().collect();
                for a in 1..=3 {
                    for b in 1..=3 {
                        for c in 1..=3 {
                            let e = eq(a, b, c, p);
                            let fast = detect_fast(&h, &e).unwrap();
                            let naive = detect_naive(&h, &e).unwrap();
                            assert_eq!(fast.has_solution, naive.has_solution, "p={p} n={n} {a},{b},{c}");

                            let count = count_solutions(&h, &e).unwrap();
                            assert_eq!(count % h.order(), 0);
                            if e.trivial_family() {
                                assert!(count >= h.order());
                                assert_eq!(fast.has_solution, count > h.order());
                            } else {
                                assert_eq!(fast.has_solution, count > 0);
                            }

                            // dilating a witness by any element of H gives another solution
                            if let Some(w) = fast.witness {
                                for k in (0..elems.len()).step_by(elems.len().div_ceil(100)) {
                                    let t = elems[k];
                                    let d = Witness {
                                        x: mul_mod(t, w.x, p),
                                        y: mul_mod(t, w.y, p),
                                        z: mul_mod(t, w.z, p),
                                    };
                                    assert!(e.is_satisfied_by(d) && !d.is_trivial());
                                    assert!(h.contains(d.x) && h.contains(d.y) && h.contains(d.z));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witness_is_first_in_enumeration_order() {
        let h = sub(1009, 4);
        let e = eq(1, 1, 2, 1009);
        let w = detect_fast(&h, &e).unwrap().witness.unwrap();
        let position = h.elements().position(|x| x == w.x).unwrap();
        for x in h.elements().take(position).filter(|&x| x != 1) {
            let y = mul_mod(inv_mod(1, 1009).unwrap(), sub_mod(2, x, 1009), 1009);
            assert!(!(h.contains(y) && y != 1));
        }
    }
}
