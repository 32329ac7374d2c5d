//! Fourier checks on the indicator of `H`.
//!
//! Convention: `Ĥ(k) = Σ_{h ∈ H} e^(-2πi k h / p)`. With it, the number of
//! solutions of `a x + b y = c z` in `H^3` is
//! `N = (1/p) Σ_k Ĥ(a k) Ĥ(b k) Ĥ(-c k)`, whose `k = 0` term is the main
//! term `δ³p²` with `δ = |H| / p`. Nonzero coefficients of a subgroup are
//! bounded by `√p`, which bounds the remaining terms by `α δ p²` where
//! `α = max_{k≠0} |Ĥ(k)| / p`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{add_mod, mul_mod};
use crate::detect::{count_solutions, Equation};
use crate::error::{Error, Result};
use crate::subgroup::Subgroup;

/// Largest modulus for the full-length transform.
pub const DFT_MAX_P: u64 = 100_000;

/// Largest modulus for the counting identity check.
pub const COUNT_IDENTITY_MAX_P: u64 = 10_000;

/// Slack on the uniformity bound.
pub const UNIFORMITY_SLACK: f64 = 1e-9;

/// Relative tolerance of the counting identity.
pub const IDENTITY_RELATIVE_TOLERANCE: f64 = 1e-6;

fn roots_of_unity(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|j| Complex64::from_polar(1.0, -TAU * j as f64 / p as f64))
        .collect()
}

/// `Ĥ(k)` for every `k` in `[0, p)`, by direct summation.
pub fn dft_indicator(sub: &Subgroup) -> Result<Vec<Complex64>> {
    let p = sub.p();
    if p > DFT_MAX_P {
        return Err(Error::Resource(format!(
            "p = {p} exceeds {DFT_MAX_P} for a full transform; use dft_indicator_at for chosen k"
        )));
    }
    let roots = roots_of_unity(p);
    let mut out = vec![Complex64::new(0.0, 0.0); p as usize];
    for h in sub.elements() {
        let mut idx = 0u64;
        for slot in out.iter_mut() {
            *slot += roots[idx as usize];
            idx = add_mod(idx, h, p);
        }
    }
    out[0] = Complex64::new(sub.order() as f64, 0.0);
    Ok(out)
}

/// `Ĥ(k)` at the requested frequencies only. Works for any `p`.
pub fn dft_indicator_at(sub: &Subgroup, ks: &[u64]) -> Vec<Complex64> {
    let p = sub.p();
    ks.iter()
        .map(|&k| {
            let k = k % p;
            sub.elements()
                .map(|h| {
                    let j = mul_mod(k, h, p);
                    Complex64::from_polar(1.0, -TAU * j as f64 / p as f64)
                })
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityReport {
    pub p: u64,
    pub n: u64,
    pub order: u64,
    pub max_nonzero_magnitude: f64,
    /// Smallest `k != 0` attaining the maximum.
    pub argmax_k: u64,
    pub alpha: f64,
    pub sqrt_p: f64,
    /// `max |Ĥ(k)| <= √p` within [`UNIFORMITY_SLACK`].
    pub uniform: bool,
}

fn uniformity_from(sub: &Subgroup, spectrum: &[Complex64]) -> UniformityReport {
    let p = sub.p();
    let (argmax_k, max_nonzero_magnitude) = spectrum
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, z)| (k as u64, z.norm()))
        .fold((0, 0.0f64), |best, cur| if cur.1 > best.1 { cur } else { best });
    let sqrt_p = (p as f64).sqrt();
    UniformityReport {
        p,
        n: sub.index(),
        order: sub.order(),
        max_nonzero_magnitude,
        argmax_k,
        alpha: max_nonzero_magnitude / p as f64,
        sqrt_p,
        uniform: max_nonzero_magnitude <= sqrt_p + UNIFORMITY_SLACK,
    }
}

/// Largest nonzero Fourier coefficient of `H`, against the `√p` bound.
/// A violation is reported in the result, not as an error.
pub fn verify_uniformity(sub: &Subgroup) -> Result<UniformityReport> {
    Ok(uniformity_from(sub, &dft_indicator(sub)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    #[serde(flatten)]
    pub uniformity: UniformityReport,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub solution_count_exact: u64,
    pub solution_count_spectral: f64,
    /// Imaginary part left over by the spectral sum; zero up to rounding.
    pub spectral_imaginary: f64,
    pub main_term: f64,
    pub error_bound: f64,
    /// Spectral and exact counts agree within the relative tolerance.
    pub identity_holds: bool,
    /// `|N - δ³p²| <= α δ p²` (plus rounding slack).
    pub error_bound_holds: bool,
}

impl SpectrumReport {
    pub fn passes(&self) -> bool {
        self.uniformity.uniform && self.identity_holds && self.error_bound_holds
    }
}

/// All spectral quantities for `H` and the given equation, with pass flags.
pub fn spectrum_report(sub: &Subgroup, eq: &Equation) -> Result<SpectrumReport> {
    let p = sub.p();
    if p > COUNT_IDENTITY_MAX_P {
        return Err(Error::Resource(format!(
            "p = {p} exceeds {COUNT_IDENTITY_MAX_P} for the counting identity"
        )));
    }
    let spectrum = dft_indicator(sub)?;
    let uniformity = uniformity_from(sub, &spectrum);
    let exact = count_solutions(sub, eq)?;
    let (a, b, c) = eq.coefficients();

    let total: Complex64 = (0..p)
        .map(|k| {
            let ak = mul_mod(a, k, p) as usize;
            let bk = mul_mod(b, k, p) as usize;
            let neg_ck = ((p - mul_mod(c, k, p)) % p) as usize;
            spectrum[ak] * spectrum[bk] * spectrum[neg_ck]
        })
        .sum();
    let spectral = total / p as f64;

    let pf = p as f64;
    let delta = sub.order() as f64 / pf;
    let main_term = delta.powi(3) * pf * pf;
    let error_bound = uniformity.alpha * delta * pf * pf;
    let exact_f = exact as f64;
    let identity_holds =
        (spectral.re - exact_f).abs() <= IDENTITY_RELATIVE_TOLERANCE * exact_f.max(1.0);
    let error_bound_holds =
        (exact_f - main_term).abs() <= error_bound + IDENTITY_RELATIVE_TOLERANCE * pf * pf;

    Ok(SpectrumReport {
        uniformity,
        a,
        b,
        c,
        solution_count_exact: exact,
        solution_count_spectral: spectral.re,
        spectral_imaginary: spectral.im,
        main_term,
        error_bound,
        identity_holds,
        error_bound_holds,
    })
}

/// Like [`spectrum_report`], but a failed counting identity is an error.
pub fn verify_count_identity(sub: &Subgroup, eq: &Equation) -> Result<SpectrumReport> {
    let report = spectrum_report(sub, eq)?;
    if !report.identity_holds {
        return Err(Error::Verification {
            what: format!("spectral solution count for p = {}, n = {}", sub.p(), sub.index()),
            expected: report.solution_count_exact as f64,
            actual: report.solution_count_spectral,
        });
    }
    if !report.error_bound_holds {
        return Err(Error::Verification {
            what: format!("error term bound for p = {}, n = {}", sub.p(), sub.index()),
            expected: report.error_bound,
            actual: (report.solution_count_exact as f64 - report.main_term).abs(),
        });
    }
    Ok(report)
}
