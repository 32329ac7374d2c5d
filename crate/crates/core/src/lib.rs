//! Exact computation of multiplicative Van der Waerden-like numbers.
//!
//! For a prime `p ≡ 1 (mod n)` let `H` be the subgroup of `F_p^x` of index
//! `n`. `VW(n)` is the least prime `q ≡ 1 (mod n)` past which every such `H`
//! contains a nontrivial three-term progression (more generally, a
//! nontrivial solution of `a x + b y = c z`).
//!
//! - [`arith`]: modular arithmetic, primality, factorization, primitive roots
//! - [`subgroup`]: the index-`n` subgroup and its membership test
//! - [`detect`]: linear-time detection, quadratic oracle, solution counts
//! - [`sieve`]: segmented prime sieves, including along `1 + k n`
//! - [`vw`]: the guarantee bound and the exact scan
//! - [`spectral`]: Fourier checks on the subgroup indicator

pub mod arith;
pub mod detect;
pub mod error;
pub mod sieve;
pub mod spectral;
pub mod subgroup;
pub mod vw;

pub use arith::PrimeContext;
pub use detect::{Coefficients, DetectionOutcome, Equation, Witness};
pub use error::{Error, Result};
pub use subgroup::Subgroup;
pub use vw::{compute_vw, scan_range, VwOptions, VwResult};
