//! The localization kernel of the relativistic kinetic energy and the
//! quadratic error form it generates.
//!
//! Localizing a state with a partition of unity costs kinetic energy; for the
//! operator in this crate the cost is carried by the explicit kernel
//!
//! ```text
//! L_χ(x, y) = (2π)⁻² α⁻³ |x−y|⁻² K₂(|x−y|/α) [χ(x) − χ(y)]² ,
//! ```
//!
//! whose total mass obeys `(2π)⁻² ∫ K₂(|y|) dy = 3/2`.  That identity turns a
//! sup-norm gradient bound on χ into the error bound
//! `⟨ψ|L_χ|ψ⟩ ≤ (3/2) ‖∇χ‖²_∞ ‖ψ‖²`, which this module makes numerically
//! checkable: [`ims_kernel`] evaluates the kernel pointwise and
//! [`localization_error_form`] evaluates the full quadratic form on a gridded
//! state.

use crate::bessel;
use crate::quad::QuadratureSpec;
use crate::{Error, Result};

/// A scalar localization function χ with a known gradient bound.
///
/// The error form only needs pointwise values plus a certified sup-norm of
/// the gradient (the constant its bound is stated in), so that is the whole
/// interface.  Implementations must guarantee `|∇χ|² ≤ grad_sup_sq()`
/// everywhere, with values in a bounded range.
pub trait ScalarField {
    fn value(&self, x: [f64; 3]) -> f64;
    /// A certified upper bound on `sup |∇χ|²` (need not be attained).
    fn grad_sup_sq(&self) -> f64;
}

/// The constant field; its localization kernel vanishes identically.
#[derive(Debug, Clone, Copy)]
pub struct ConstantField(pub f64);

impl ScalarField for ConstantField {
    fn value(&self, _x: [f64; 3]) -> f64 {
        self.0
    }
    fn grad_sup_sq(&self) -> f64 {
        0.0
    }
}

/// A linear profile along `normal`, clamped to [0, 1]:
/// `χ(x) = clamp((x·n − center)/width + 1/2)`.  Lipschitz with constant
/// `1/width`, so `grad_sup_sq = 1/width²`.
#[derive(Debug, Clone, Copy)]
pub struct LinearRamp {
    normal: [f64; 3],
    center: f64,
    width: f64,
}

impl LinearRamp {
    pub fn new(direction: [f64; 3], center: f64, width: f64) -> Result<Self> {
        let norm = (direction[0].powi(2) + direction[1].powi(2) + direction[2].powi(2)).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::domain("ramp direction must be a nonzero vector"));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::domain(format!(
                "ramp width must be positive, got {width}"
            )));
        }
        Ok(LinearRamp {
            normal: [direction[0] / norm, direction[1] / norm, direction[2] / norm],
            center,
            width,
        })
    }
}

impl ScalarField for LinearRamp {
    fn value(&self, x: [f64; 3]) -> f64 {
        let proj = x[0] * self.normal[0] + x[1] * self.normal[1] + x[2] * self.normal[2];
        ((proj - self.center) / self.width + 0.5).clamp(0.0, 1.0)
    }
    fn grad_sup_sq(&self) -> f64 {
        1.0 / (self.width * self.width)
    }
}

/// A smooth sigmoid profile along `normal`:
/// `χ(x) = (1 + tanh((x·n − center)/width))/2`, with `|∇χ| ≤ 1/(2 width)`.
#[derive(Debug, Clone, Copy)]
pub struct TanhRamp {
    normal: [f64; 3],
    center: f64,
    width: f64,
}

impl TanhRamp {
    pub fn new(direction: [f64; 3], center: f64, width: f64) -> Result<Self> {
        let linear = LinearRamp::new(direction, center, width)?;
        Ok(TanhRamp {
            normal: linear.normal,
            center,
            width,
        })
    }
}

impl ScalarField for TanhRamp {
    fn value(&self, x: [f64; 3]) -> f64 {
        let proj = x[0] * self.normal[0] + x[1] * self.normal[1] + x[2] * self.normal[2];
        0.5 * (1.0 + ((proj - self.center) / self.width).tanh())
    }
    fn grad_sup_sq(&self) -> f64 {
        // d/du tanh(u)/2 peaks at 1/2, so |∇χ| ≤ 1/(2 width).
        1.0 / (4.0 * self.width * self.width)
    }
}

/// A kernel value together with the quadrature error of the `K₂` evaluation
/// behind it.
#[derive(Debug, Clone, Copy)]
pub struct KernelEvaluation {
    pub value: f64,
    pub quadrature_error: f64,
}

/// Pointwise localization kernel
/// `L_χ(x,y) = (2π)⁻² α⁻³ |x−y|⁻² K₂(|x−y|/α) [χ(x)−χ(y)]²`.
///
/// The diagonal `x = y` is a non-integrable point of the bare kernel and is
/// rejected; callers integrating the form handle the diagonal by excision
/// (see [`localization_error_form`]).
pub fn ims_kernel(
    x: [f64; 3],
    y: [f64; 3],
    alpha: f64,
    chi: &dyn ScalarField,
    q: &QuadratureSpec,
) -> Result<KernelEvaluation> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!(
            "ims_kernel requires α > 0, got {alpha}"
        )));
    }
    let r2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2);
    if r2 == 0.0 {
        return Err(Error::SingularPoint(
            "ims_kernel evaluated on the diagonal x = y".to_string(),
        ));
    }
    let r = r2.sqrt();
    let dchi = chi.value(x) - chi.value(y);
    if dchi == 0.0 {
        // Exact zero regardless of the kernel weight; skip the quadrature.
        return Ok(KernelEvaluation {
            value: 0.0,
            quadrature_error: 0.0,
        });
    }
    let (k2, k2_err) = bessel::bessel_k2_with_error(r / alpha, q)?;
    let prefactor = FOUR_PI2_INV / (alpha.powi(3) * r2) * dchi * dchi;
    Ok(KernelEvaluation {
        value: prefactor * k2,
        quadrature_error: prefactor * k2_err,
    })
}

/// `(2π)⁻²`.
const FOUR_PI2_INV: f64 = 1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);

/// A real state sampled on a uniform cubic lattice, normalized so that
/// `Σ ψ²·h³ = 1`.
///
/// The lattice structure (not just a point cloud) is what makes the double
/// sum in [`localization_error_form`] affordable: the kernel weight depends
/// only on the integer offset between nodes, so it is cached per distinct
/// squared offset.
#[derive(Debug, Clone)]
pub struct GriddedState {
    origin: [f64; 3],
    h: f64,
    n: usize,
    values: Vec<f64>,
}

impl GriddedState {
    /// Sample `f` on the lattice `origin + h·(i,j,k)`, `0 ≤ i,j,k < n`, and
    /// normalize.  Fails if the sampled norm vanishes.
    pub fn from_fn(
        origin: [f64; 3],
        h: f64,
        n: usize,
        f: impl Fn([f64; 3]) -> f64,
    ) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::domain(format!("grid step must be positive, got {h}")));
        }
        if n < 2 {
            return Err(Error::domain(format!("grid needs at least 2 nodes per axis, got {n}")));
        }
        let mut values = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    values.push(f([
                        origin[0] + h * i as f64,
                        origin[1] + h * j as f64,
                        origin[2] + h * k as f64,
                    ]));
                }
            }
        }
        let norm_sq: f64 = values.iter().map(|v| v * v).sum::<f64>() * h.powi(3);
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::domain(
                "sampled state has zero or non-finite norm on the grid",
            ));
        }
        let scale = norm_sq.sqrt().recip();
        for v in &mut values {
            *v *= scale;
        }
        Ok(GriddedState {
            origin,
            h,
            n,
            values,
        })
    }

    /// An isotropic Gaussian `exp(−|x−center|²/(2σ²))`, sampled on a cube of
    /// half-extent `L` centered on `center` with `n` nodes per axis.
    pub fn gaussian(center: [f64; 3], sigma: f64, half_extent: f64, n: usize) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::domain(format!("gaussian width must be positive, got {sigma}")));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(Error::domain(format!(
                "half extent must be positive, got {half_extent}"
            )));
        }
        let h = 2.0 * half_extent / (n.max(2) - 1) as f64;
        let origin = [
            center[0] - half_extent,
            center[1] - half_extent,
            center[2] - half_extent,
        ];
        Self::from_fn(origin, h, n, |x| {
            let d2 = (x[0] - center[0]).powi(2)
                + (x[1] - center[1]).powi(2)
                + (x[2] - center[2]).powi(2);
            (-d2 / (2.0 * sigma * sigma)).exp()
        })
    }

    pub fn grid_step(&self) -> f64 {
        self.h
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.n
    }

    /// Position of lattice node `(i, j, k)`.
    pub fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.origin[0] + self.h * i as f64,
            self.origin[1] + self.h * j as f64,
            self.origin[2] + self.h * k as f64,
        ]
    }

    /// `Σ ψ² h³`; 1 after construction by definition.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.h.powi(3)
    }
}

/// Relative half-width of the diagonal excision: node pairs closer than
/// `δ = 1e−6·α` are dropped from the double sum.  The excised mass is
/// bounded analytically by `(2δ/(πα)) ‖∇χ‖²_∞ ‖ψ‖²` via the small-argument
/// behavior `|x−y|⁻² K₂(|x−y|/α) ≈ 2α²|x−y|⁻⁴` and the Lipschitz factor
/// `[χ(x)−χ(y)]² ≤ ‖∇χ‖²_∞ |x−y|²` — around 1e−6 of the bound's scale, far
/// below every tolerance in use.
pub const DIAGONAL_EXCISION_FACTOR: f64 = 1e-6;

/// The quadratic localization-error form `⟨ψ|L_χ|ψ⟩` on a gridded state.
///
/// Requires `‖ψ‖ = 1` on its grid within 1e−10.  The double sum runs over
/// all node pairs off the excised diagonal; kernel weights are computed with
/// [`bessel::bessel_k2`] under the supplied quadrature spec, cached per
/// distinct squared lattice offset.
pub fn localization_error_form(
    psi: &GriddedState,
    chi: &dyn ScalarField,
    alpha: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!(
            "localization_error_form requires α > 0, got {alpha}"
        )));
    }
    let norm_sq = psi.norm_sq();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "state must be normalized on its grid: ‖ψ‖² = {norm_sq:.12}"
        )));
    }

    let n = psi.n;
    let h = psi.h;
    let delta = DIAGONAL_EXCISION_FACTOR * alpha;

    // Kernel weight by squared integer offset d² = di²+dj²+dk².  Beyond
    // t = r/α ≈ 60 the kernel has decayed below 1e−26 of its bulk and is
    // treated as zero.
    let max_d2 = 3 * (n - 1) * (n - 1);
    let mut radial = vec![0.0f64; max_d2 + 1];
    for d2 in 1..=max_d2 {
        let r = h * (d2 as f64).sqrt();
        if r < delta {
            continue;
        }
        let t = r / alpha;
        if t > 60.0 {
            continue;
        }
        radial[d2] = FOUR_PI2_INV / (alpha.powi(3) * r * r) * bessel::bessel_k2(t, q)?;
    }

    // χ sampled once per node, in the same lexicographic layout as ψ.
    let mut chi_values = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                chi_values.push(chi.value(psi.point(i, j, k)));
            }
        }
    }

    // Σ_{a≠b} w² ψ_a ψ_b K(|x_a−x_b|) (χ_a−χ_b)², using symmetry to halve
    // the pair loop.  The (χ_a−χ_b)² factor vanishes on the diagonal anyway;
    // excision only matters for degenerate lattices with h < δ.
    let w2 = h.powi(6);
    let mut form = 0.0f64;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for ia in 0..n {
        for ja in 0..n {
            for ka in 0..n {
                let a = idx(ia, ja, ka);
                let pa = psi.values[a];
                if pa == 0.0 {
                    continue;
                }
                let ca = chi_values[a];
                // Pairs strictly after `a` in lexicographic order.
                for ib in ia..n {
                    let di = ib - ia;
                    let (jb_start, kb_start_same_j) = if di == 0 { (ja, ka + 1) } else { (0, 0) };
                    for jb in jb_start..n {
                        let dj = jb as isize - ja as isize;
                        let kb_start = if di == 0 && jb == ja { kb_start_same_j } else { 0 };
                        for kb in kb_start..n {
                            let dk = kb as isize - ka as isize;
                            let d2 = di * di + (dj * dj) as usize + (dk * dk) as usize;
                            let kr = radial[d2];
                            if kr == 0.0 {
                                continue;
                            }
                            let b = idx(ib, jb, kb);
                            let dchi = ca - chi_values[b];
                            if dchi == 0.0 {
                                continue;
                            }
                            form += 2.0 * w2 * pa * psi.values[b] * kr * dchi * dchi;
                        }
                    }
                }
            }
        }
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> QuadratureSpec {
        QuadratureSpec::with_scheme(crate::quad::Scheme::DoubleExponential)
    }

    #[test]
    fn constant_chi_kills_the_kernel() {
        let chi = ConstantField(0.7);
        let ev = ims_kernel([0.0, 0.0, 0.0], [1.0, 2.0, 0.5], 1.0, &chi, &q()).unwrap();
        assert_eq!(ev.value, 0.0);
    }

    #[test]
    fn kernel_is_symmetric_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let chi = TanhRamp::new([1.0, -0.5, 0.25], 0.1, 0.8).unwrap();
        for _ in 0..1000 {
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let y = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            if x == y {
                continue;
            }
            let xy = ims_kernel(x, y, 0.7, &chi, &q()).unwrap();
            let yx = ims_kernel(y, x, 0.7, &chi, &q()).unwrap();
            assert_eq!(xy.value, yx.value);
            assert!(xy.value >= 0.0);
        }
    }

    #[test]
    fn kernel_matches_direct_formula_value() {
        // α = 1, |x−y| = 1, χ-difference 0.1: value = (2π)⁻² K₂(1) · 0.01.
        let chi = LinearRamp::new([0.0, 0.0, 1.0], 0.5, 10.0).unwrap();
        let x = [0.0, 0.0, 0.0];
        let y = [0.0, 0.0, 1.0];
        let dchi = chi.value(x) - chi.value(y);
        assert_relative_eq!(dchi.abs(), 0.1, max_relative = 1e-12);
        let ev = ims_kernel(x, y, 1.0, &chi, &q()).unwrap();
        let expected = FOUR_PI2_INV * crate::bessel::k2_power_series(1.0).unwrap() * 0.01;
        assert_relative_eq!(ev.value, expected, max_relative = 1e-8);
        // ≈ 4.115e−4
        assert!((ev.value - 4.115e-4).abs() < 1e-6);
    }

    #[test]
    fn kernel_scale_covariance() {
        // (α, |x−y|) → (λα, λ|x−y|) at fixed χ-difference multiplies the
        // kernel by λ⁻⁵.
        struct Rescaled<'a> {
            inner: &'a dyn ScalarField,
            lambda: f64,
        }
        impl ScalarField for Rescaled<'_> {
            fn value(&self, x: [f64; 3]) -> f64 {
                self.inner
                    .value([x[0] / self.lambda, x[1] / self.lambda, x[2] / self.lambda])
            }
            fn grad_sup_sq(&self) -> f64 {
                self.inner.grad_sup_sq() / (self.lambda * self.lambda)
            }
        }

        let chi = TanhRamp::new([0.3, 1.0, -0.2], -0.1, 0.6).unwrap();
        let x = [0.2, -0.4, 0.9];
        let y = [-0.6, 0.3, 0.1];
        let alpha = 0.8;
        let base = ims_kernel(x, y, alpha, &chi, &q()).unwrap().value;
        for lambda in [0.5, 2.0, 3.7] {
            let scaled_chi = Rescaled { inner: &chi, lambda };
            let xs = [lambda * x[0], lambda * x[1], lambda * x[2]];
            let ys = [lambda * y[0], lambda * y[1], lambda * y[2]];
            let scaled = ims_kernel(xs, ys, lambda * alpha, &scaled_chi, &q()).unwrap().value;
            assert_relative_eq!(scaled, base * lambda.powi(-5), max_relative = 1e-10);
        }
    }

    #[test]
    fn diagonal_and_domain_errors() {
        let chi = ConstantField(0.0);
        let x = [1.0, 2.0, 3.0];
        assert!(matches!(
            ims_kernel(x, x, 1.0, &chi, &q()),
            Err(Error::SingularPoint(_))
        ));
        assert!(ims_kernel(x, [0.0; 3], 0.0, &chi, &q()).is_err());
        assert!(ims_kernel(x, [0.0; 3], -1.0, &chi, &q()).is_err());
    }

    #[test]
    fn form_vanishes_for_constant_chi() {
        let psi = GriddedState::gaussian([0.0; 3], 1.0, 2.5, 9).unwrap();
        let v = localization_error_form(&psi, &ConstantField(1.0), 0.5, &q()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn form_respects_the_gradient_bound() {
        // Gaussian ψ against a linear χ (unclamped across the grid): the
        // value must sit strictly below (3/2)‖∇χ‖²_∞.  For this pairing the
        // continuum form reduces exactly to a radial integral — the Gaussian
        // autocorrelation ∫ψ(x)ψ(x+u)dx = e^{−u²/(4σ²)} times the kernel and
        // the angular average ⟨(n·û)²⟩ = 1/3:
        //
        //   ⟨ψ|L_χ|ψ⟩ = (g²/(3π)) ∫₀^∞ t² K₂(t) e^{−(αt)²/(4σ²)} dt ,
        //
        // which serves as the independent oracle here.
        let sigma = 0.8;
        let alpha = 1.0;
        let psi = GriddedState::gaussian([0.0; 3], sigma, 2.4, 13).unwrap();
        let chi = LinearRamp::new([0.0, 0.0, 1.0], 0.0, 12.0).unwrap();
        let v = localization_error_form(&psi, &chi, alpha, &q()).unwrap();

        let bound = 1.5 * chi.grad_sup_sq() * psi.norm_sq();
        assert!(v > 0.0);
        assert!(v < bound, "form {v:.6e} must stay below bound {bound:.6e}");

        let gss = chi.grad_sup_sq();
        let damp = alpha * alpha / (4.0 * sigma * sigma);
        let radial = crate::quad::integrate_to_infinity(
            |t| t * t * crate::bessel::k2_power_series(t).unwrap() * (-damp * t * t).exp(),
            0.0,
            &q(),
        )
        .unwrap()
        .value;
        let oracle = gss * radial / (3.0 * std::f64::consts::PI);
        // The lattice has no pairs below the grid step, so it misses the
        // near-diagonal kernel mass ∫₀^{h/2α} t²K₂ dt — an O(h/α) undershoot
        // (measured ≈ 0.76·oracle at h = 0.4α).  The band is asymmetric
        // because that truncation can only lower the value; its job is to
        // catch constant-factor slips, which land far outside ±30%.
        assert!(
            v <= 1.02 * oracle && v >= 0.70 * oracle,
            "lattice form {v:.4e} vs radial oracle {oracle:.4e}"
        );
    }

    #[test]
    fn form_bound_holds_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let sigma = rng.gen_range(0.5..1.4);
            let alpha = rng.gen_range(0.25..1.2);
            let psi = GriddedState::gaussian(
                [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)],
                sigma,
                3.0 * sigma,
                11,
            )
            .unwrap();
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.0)];
            let width = rng.gen_range(0.4..2.0);
            let center = rng.gen_range(-0.5..0.5);
            let (value, gss) = if rng.gen_bool(0.5) {
                let chi = LinearRamp::new(dir, center, width).unwrap();
                (
                    localization_error_form(&psi, &chi, alpha, &q()).unwrap(),
                    chi.grad_sup_sq(),
                )
            } else {
                let chi = TanhRamp::new(dir, center, width).unwrap();
                (
                    localization_error_form(&psi, &chi, alpha, &q()).unwrap(),
                    chi.grad_sup_sq(),
                )
            };
            assert!(value <= 1.5 * gss * psi.norm_sq());
            assert!(value >= 0.0);
        }
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let mut psi = GriddedState::gaussian([0.0; 3], 1.0, 2.0, 7).unwrap();
        psi.values[0] += 0.5;
        let r = localization_error_form(&psi, &ConstantField(0.0), 1.0, &q());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn grid_construction_errors() {
        assert!(GriddedState::from_fn([0.0; 3], 0.0, 5, |_| 1.0).is_err());
        assert!(GriddedState::from_fn([0.0; 3], 0.1, 1, |_| 1.0).is_err());
        assert!(GriddedState::from_fn([0.0; 3], 0.1, 5, |_| 0.0).is_err());
        assert!(GriddedState::gaussian([0.0; 3], -1.0, 2.0, 7).is_err());
        assert!(LinearRamp::new([0.0; 3], 0.0, 1.0).is_err());
        assert!(TanhRamp::new([1.0, 0.0, 0.0], 0.0, 0.0).is_err());
    }
}
