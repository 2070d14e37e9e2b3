//! The explicit two-center partition of unity, its gradient identities, and
//! the Cauchy–Schwarz attraction estimate.
//!
//! The molecule-versus-separated-atoms comparison localizes an N-particle
//! state around the two nuclei with an explicit pair of functions
//! `χ₁, χ₂` satisfying `χ₁² + χ₂² = 1`.  Everything the analysis needs from
//! them is algebraic: the partition identity, the closed-form gradient sum
//! and its sup bound (which drives the localization-error budget), and the
//! pointwise Cauchy–Schwarz estimate that converts the two nuclear
//! attractions into a single effective one.  This module implements those
//! objects exactly as written and exposes their identities for testing.

use crate::{Error, Result};

/// The two-nucleus geometry: positions mirrored about the origin, their
/// separation, and the charge ratio that fixes the localization family.
///
/// The derived quantities follow the convention
/// `R̄⃗ = (R⃗₁ − R⃗₂)/(μ+1)` and `x̄ = x + [(1−μ)/(2(μ+1))](R⃗₁ − R⃗₂)`, under
/// which `x̄ + μR̄⃗ = x − R⃗₂` and `x̄ − R̄⃗ = x − R⃗₁` hold identically.
#[derive(Debug, Clone, Copy)]
pub struct DiatomicGeometry {
    r1: [f64; 3],
    r2: [f64; 3],
    separation: f64,
    mu: f64,
}

impl DiatomicGeometry {
    /// Nuclei of charges `z1 ≥ z2 > 0` at `±(R/2)ê_z`, with `μ = z2/z1`.
    ///
    /// Callers with `z2 > z1` must swap labels (reorder error); `R = 0` is
    /// rejected because the localization family degenerates there.
    pub fn new(z1: f64, z2: f64, separation: f64) -> Result<Self> {
        if !(z1.is_finite() && z1 > 0.0 && z2.is_finite() && z2 > 0.0) {
            return Err(Error::domain(format!(
                "nuclear charges must be positive, got Z1 = {z1}, Z2 = {z2}"
            )));
        }
        if z2 > z1 {
            return Err(Error::Reorder(format!(
                "convention requires Z1 >= Z2, got Z1 = {z1} < Z2 = {z2}; swap the labels"
            )));
        }
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::domain(format!(
                "internuclear separation must be positive, got {separation}"
            )));
        }
        Ok(DiatomicGeometry {
            r1: [0.0, 0.0, 0.5 * separation],
            r2: [0.0, 0.0, -0.5 * separation],
            separation,
            mu: z2 / z1,
        })
    }

    pub fn nucleus1(&self) -> [f64; 3] {
        self.r1
    }

    pub fn nucleus2(&self) -> [f64; 3] {
        self.r2
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Charge ratio `μ = Z₂/Z₁ ∈ (0, 1]`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `R̄ = R/(μ+1)`.
    pub fn rbar(&self) -> f64 {
        self.separation / (self.mu + 1.0)
    }

    /// `R̄⃗ = (R⃗₁ − R⃗₂)/(μ+1)`.
    pub fn rbar_vec(&self) -> [f64; 3] {
        let f = 1.0 / (self.mu + 1.0);
        [
            (self.r1[0] - self.r2[0]) * f,
            (self.r1[1] - self.r2[1]) * f,
            (self.r1[2] - self.r2[2]) * f,
        ]
    }

    /// The shifted coordinate `x̄ = x + [(1−μ)/(2(μ+1))](R⃗₁ − R⃗₂)`.
    pub fn xbar(&self, x: [f64; 3]) -> [f64; 3] {
        let c = (1.0 - self.mu) / (2.0 * (self.mu + 1.0));
        [
            x[0] + c * (self.r1[0] - self.r2[0]),
            x[1] + c * (self.r1[1] - self.r2[1]),
            x[2] + c * (self.r1[2] - self.r2[2]),
        ]
    }

    /// The point where `x̄ = 0` — the maximizer of [`grad_sum`], where
    /// [`sup_grad_bound`] is attained.
    pub fn gradient_peak_point(&self) -> [f64; 3] {
        let c = (1.0 - self.mu) / (2.0 * (self.mu + 1.0));
        [
            -c * (self.r1[0] - self.r2[0]),
            -c * (self.r1[1] - self.r2[1]),
            -c * (self.r1[2] - self.r2[2]),
        ]
    }
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn norm_sq(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

/// The localizing pair
/// `χ₁ = |x̄+μR̄⃗| / [√(μ+1)·(|x̄|²+μR̄²)^{1/2}]`,
/// `χ₂ = √μ·|x̄−R̄⃗| / [√(μ+1)·(|x̄|²+μR̄²)^{1/2}]`.
///
/// Satisfies `χ₁² + χ₂² = 1` identically; `χ₁ = 1` at nucleus 1 and `0` at
/// nucleus 2.
pub fn chi_pair(x: [f64; 3], geo: &DiatomicGeometry) -> (f64, f64) {
    let xb = geo.xbar(x);
    let rb = geo.rbar_vec();
    let mu = geo.mu;
    let a = norm([xb[0] + mu * rb[0], xb[1] + mu * rb[1], xb[2] + mu * rb[2]]);
    let b = norm([xb[0] - rb[0], xb[1] - rb[1], xb[2] - rb[2]]);
    let denom = ((mu + 1.0) * (norm_sq(xb) + mu * geo.rbar().powi(2))).sqrt();
    (a / denom, mu.sqrt() * b / denom)
}

/// Closed-form gradient sum
/// `(∇χ₁)² + (∇χ₂)² = [μ/(μ+1)²]·R²/(|x̄|² + μR̄²)²`.
pub fn grad_sum(x: [f64; 3], geo: &DiatomicGeometry) -> f64 {
    let d2 = norm_sq(geo.xbar(x)) + geo.mu * geo.rbar().powi(2);
    geo.mu / (geo.mu + 1.0).powi(2) * geo.separation.powi(2) / (d2 * d2)
}

/// The sup bound `R·sup_x[(∇χ₁)² + (∇χ₂)²] = (μ+1)²/(μR)`, attained at
/// `x̄ = 0`.
pub fn sup_grad_bound(geo: &DiatomicGeometry) -> f64 {
    (geo.mu + 1.0).powi(2) / (geo.mu * geo.separation)
}

/// Margin of the pointwise Cauchy–Schwarz attraction estimate
/// `(Z₂|x̄+μR̄⃗| + μZ₁|x̄−R̄⃗|)² ≤ (Z₂² + Z₁²μ)(μ+1)(|x̄|² + μR̄²)`,
/// returned as RHS − LHS (≥ 0 up to rounding).
///
/// The charges must reproduce the geometry's ratio `μ = Z₂/Z₁`.
pub fn attraction_estimate_margin(
    x: [f64; 3],
    z1: f64,
    z2: f64,
    geo: &DiatomicGeometry,
) -> Result<f64> {
    if !(z1.is_finite() && z1 > 0.0 && z2.is_finite() && z2 > 0.0) {
        return Err(Error::domain(format!(
            "charges must be positive, got Z1 = {z1}, Z2 = {z2}"
        )));
    }
    let mu = geo.mu;
    if (z2 / z1 - mu).abs() > 1e-12 * mu.max(1.0) {
        return Err(Error::Precondition(format!(
            "charge ratio Z2/Z1 = {} does not match the geometry's mu = {}",
            z2 / z1,
            mu
        )));
    }
    let xb = geo.xbar(x);
    let rb = geo.rbar_vec();
    let a = norm([xb[0] + mu * rb[0], xb[1] + mu * rb[1], xb[2] + mu * rb[2]]);
    let b = norm([xb[0] - rb[0], xb[1] - rb[1], xb[2] - rb[2]]);
    let lhs = (z2 * a + mu * z1 * b).powi(2);
    let rhs = (z2 * z2 + z1 * z1 * mu) * (mu + 1.0) * (norm_sq(xb) + mu * geo.rbar().powi(2));
    Ok(rhs - lhs)
}

/// The localization-error budget `3σN(μ+1)²/μ` entering the stability
/// inequality.
///
/// `r0` is the internuclear-distance floor the budget is invoked with; the
/// distance itself cancels between the gradient-sup bound (∝ 1/R) and the
/// distance floor (∝ R), so it does not appear in the formula — it is
/// validated here because a budget quoted for a nonpositive floor is
/// meaningless.
pub fn ims_error_budget(n: u64, r0: f64, mu: f64, sigma: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("electron number N must be at least 1"));
    }
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::domain(format!(
            "distance floor must be positive, got {r0}"
        )));
    }
    if !(mu.is_finite() && mu > 0.0 && mu <= 1.0) {
        return Err(Error::domain(format!("mu must lie in (0, 1], got {mu}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    Ok(3.0 * sigma * n as f64 * (mu + 1.0).powi(2) / mu)
}
