//! The modified Bessel function `K₂` and the integral identities built on it.
//!
//! The kinetic-energy comparison at the heart of the localization analysis is
//! controlled by the kernel `|x−y|⁻² K₂(|x−y|/α)`, so `K₂` is evaluated here
//! through the same representation that analysis uses:
//!
//! ```text
//! K₂(t) = t ∫₀^∞ e^{−t √(s²+1)} s² ds ,   t > 0 .
//! ```
//!
//! That integral is the primary evaluation path ([`bessel_k2`]).  The
//! classical power series ([`k2_power_series`]) and large-argument expansion
//! ([`k2_asymptotic`]) are provided as independent oracles for tests; they are
//! not used by the solvers.

use crate::quad::{self, QuadratureSpec, Scheme};
use crate::{Error, Result};

/// Euler–Mascheroni constant, used by the small-argument series.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `K₂(t)` plus the quadrature error estimate of the evaluation.
///
/// The integral representation `t ∫₀^∞ e^{−t√(s²+1)} s² ds` is evaluated
/// under the substitution `s = σ/t`, which turns it into
/// `t⁻² ∫₀^∞ e^{−√(t²+σ²)} σ² dσ` — the same representation, but with the
/// integrand's peak pinned near `σ ≈ 2` for every `t`, so the quadrature
/// behaves uniformly from the Laurent regime `t → 0` out to deep decay.
/// Pass a relative-tolerance-dominated spec for very large `t`, where the
/// value underflows any fixed absolute tolerance.
pub fn bessel_k2_with_error(t: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!("bessel_k2 requires t > 0, got {t}")));
    }
    let t2 = t * t;
    let r = quad::integrate_to_infinity(
        |sigma| (-(t2 + sigma * sigma).sqrt()).exp() * sigma * sigma,
        0.0,
        spec,
    )?;
    Ok((r.value / t2, r.error / t2))
}

/// `K₂(t)` through the integral representation; see [`bessel_k2_with_error`].
pub fn bessel_k2(t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(bessel_k2_with_error(t, spec)?.0)
}

/// Small-argument power series for `K₂` (test oracle).
///
/// `K₂(t) = 2/t² − 1/2 − ln(t/2) I₂(t)
///          + (t/2)² (1/2) Σₖ [ψ(k+1) + ψ(k+3)] (t²/4)ᵏ / (k! (k+2)!)`
///
/// Terms are accumulated until they stop changing the sum; the series is
/// accurate to roundoff for `t ≲ 5`.
pub fn k2_power_series(t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!(
            "k2_power_series requires t > 0, got {t}"
        )));
    }
    let q = 0.25 * t * t; // t²/4
    let log_half_t = (0.5 * t).ln();

    // I₂(t) = (t/2)² Σₖ qᵏ / (k! (k+2)!)
    let mut i2_sum = 0.0f64;
    // Σₖ [ψ(k+1) + ψ(k+3)] qᵏ / (k! (k+2)!)
    let mut psi_sum = 0.0f64;
    // qᵏ / (k! (k+2)!), starting at k = 0 with 1/2.
    let mut term = 0.5f64;
    // ψ(1) = −γ, ψ(m) = −γ + Σ_{j<m} 1/j ; track ψ(k+1) and ψ(k+3).
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = -EULER_GAMMA + 1.0 + 0.5;
    for k in 0..200 {
        i2_sum += term;
        let delta = (psi_a + psi_b) * term;
        let before = psi_sum;
        psi_sum += delta;
        if i2_sum != 0.0 && term.abs() < 1e-18 * i2_sum.abs() && psi_sum == before {
            break;
        }
        let kf = (k + 1) as f64;
        term *= q / (kf * (kf + 2.0));
        psi_a += 1.0 / kf;
        psi_b += 1.0 / (kf + 2.0);
    }
    let i2 = q * i2_sum;
    Ok(2.0 / (t * t) - 0.5 - log_half_t * i2 + q * 0.5 * psi_sum)
}

/// Large-argument expansion for `K₂` (test oracle):
/// `√(π/(2t)) e^{−t} [1 + 15/(8t) + 105/(128t²) − 315/(1024t³) + …]`,
/// truncated after `terms` terms (`terms ≥ 1`).
pub fn k2_asymptotic(t: f64, terms: usize) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::domain(format!(
            "k2_asymptotic requires t > 0, got {t}"
        )));
    }
    if terms == 0 {
        return Err(Error::domain("k2_asymptotic requires at least one term"));
    }
    // aₖ₊₁ = aₖ (4ν² − (2k+1)²) / (8t (k+1)) with ν = 2.
    let mut sum = 0.0f64;
    let mut a = 1.0f64;
    for k in 0..terms {
        sum += a;
        let odd = (2 * k + 1) as f64;
        a *= (16.0 - odd * odd) / (8.0 * t * (k as f64 + 1.0));
    }
    Ok((std::f64::consts::PI / (2.0 * t)).sqrt() * (-t).exp() * sum)
}

/// `∫₀^∞ t² K₂(t) dt`, evaluated numerically from the integral
/// representation.  The exact value is `3π/2`.
pub fn k2_second_moment(spec: &QuadratureSpec) -> Result<f64> {
    // The integrand is smooth, peaked near t ≈ 2, and decays like e^{−t}.
    // The outer relative target stays above the noise the inner integrals
    // leave on each sample, since every sample is itself an integral.
    let outer = QuadratureSpec::new(Scheme::DoubleExponential, 1e-9, 1e-8, 24)?;
    let mut inner_err: Option<Error> = None;
    let r = quad::integrate_to_infinity(
        |t| match bessel_k2(t, spec) {
            Ok(v) => t * t * v,
            Err(e) => {
                inner_err.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        &outer,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    Ok(r?.value)
}

/// Mass of the localization kernel: `(2π)⁻² ∫_{ℝ³} K₂(|y|) dy`, reduced to
/// `(1/π) ∫₀^∞ t² K₂(t) dt`.  The exact value is `3/2`; this is the constant
/// that turns a gradient bound on a partition of unity into a kinetic-energy
/// error bound.
pub fn k2_mass_integral(spec: &QuadratureSpec) -> Result<f64> {
    Ok(k2_second_moment(spec)? / std::f64::consts::PI)
}

/// Lanczos approximation with `g = 7` and nine coefficients; relative error
/// is a few parts in 10¹⁴ over the arguments used here.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFICIENTS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// The Euler gamma function `Γ(x)`.
///
/// Used by the molecular quadratures for the closed-form moments
/// `∫₀^∞ d^m e^{−(d/r_c)⁴} dd = (r_c^{m+1}/4) Γ((m+1)/4)` that restore the
/// analytically subtracted near-nucleus singularities.  Arguments below `1/2`
/// go through the reflection formula; the poles at the non-positive integers
/// are rejected as domain errors.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma requires finite x, got {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::domain(format!("gamma pole at x = {x}")));
    }
    if x < 0.5 {
        // Γ(x) Γ(1−x) = π / sin(πx)
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x)?));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFICIENTS[0];
    for (i, c) in LANCZOS_COEFFICIENTS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc)
}
