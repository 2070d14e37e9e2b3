//! Closed-form stability bounds for a diatomic molecule of two fixed nuclei
//! plus n relativistic electrons.
//!
//! Everything here is algebra on a handful of inputs — no quadrature — so
//! the calculators return exactly what the formulas say, and the worked
//! values in the tests are frozen to machine precision where the arithmetic
//! is exact.  Energies are expressed in units where the reference atomic
//! scale is `Z^2`; lengths in units of the reference atomic radius.
//!
//! Several bounds carry an undetermined positive constant (`tau`, `c`,
//! `c0`, `c1`) whose existence is established but whose value is not; all
//! default to 1 and are echoed into reports so a caller can rescale.

use crate::report::{entry, BoundReport, Rational, ReportValue};
use crate::{Error, Result};

/// Critical coupling constant 2/pi: the supremum of `Z * alpha` for which
/// the one-electron relativistic atom is bounded below.
pub const CRITICAL_COUPLING: f64 = 2.0 / std::f64::consts::PI;

/// Exchange statistics of the electrons.
///
/// Anti-symmetrization improves every n-dependent constant from `n` to
/// `n^(1/3)`; `NoSymmetry` is the bosonic / unrestricted worst case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticleStatistics {
    Fermionic,
    NoSymmetry,
}

/// Validated parameter set shared by the bound calculators.
#[derive(Debug, Clone, Copy)]
pub struct BoundConfig {
    pub epsilon: f64,
    pub tau: f64,
    pub c: f64,
    pub statistics: ParticleStatistics,
}

impl BoundConfig {
    /// `epsilon` must lie strictly inside (0, 1); `tau` and `c` must be
    /// strictly positive and finite.
    pub fn new(
        epsilon: f64,
        tau: f64,
        c: f64,
        statistics: ParticleStatistics,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::domain(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        for (name, v) in [("tau", tau), ("c", c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(BoundConfig {
            epsilon,
            tau,
            c,
            statistics,
        })
    }
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            epsilon: 0.5,
            tau: 1.0,
            c: 1.0,
            statistics: ParticleStatistics::Fermionic,
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::domain(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

/// Electron-count factor `kappa(n) = tau * n` (no symmetry) or
/// `tau * n^(1/3)` (fermionic).
pub fn kappa(n: u64, statistics: ParticleStatistics, tau: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("electron count n must be at least 1"));
    }
    check_positive("tau", tau)?;
    let n = n as f64;
    Ok(match statistics {
        ParticleStatistics::NoSymmetry => tau * n,
        ParticleStatistics::Fermionic => tau * n.cbrt(),
    })
}

/// Interpolation constant `sigma(epsilon, tau) = 2 * (1 + 1/(epsilon*(1-epsilon))) * tau`.
///
/// Diverges at both endpoints of (0, 1); the minimum over epsilon is at 1/2.
pub fn sigma(epsilon: f64, tau: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    check_positive("tau", tau)?;
    Ok(2.0 * (1.0 + 1.0 / (epsilon * (1.0 - epsilon))) * tau)
}

/// Coarse lower bound `-Z^2 * kappa(n)` on the n-electron ground energy of a
/// single atom of charge Z: each electron is bounded by the one-electron
/// atom, and anti-symmetrization upgrades the count factor to `n^(1/3)`.
pub fn lemma3_bound(z: f64, n: u64, statistics: ParticleStatistics, tau: f64) -> Result<f64> {
    check_positive("Z", z)?;
    Ok(-z * z * kappa(n, statistics, tau)?)
}

/// Localized one-atom trace bound, full and simplified forms.
#[derive(Debug, Clone, Copy)]
pub struct DlyTraceBound {
    /// `-C*(Z*alpha)^(1/2)*Z^2 - C*Z^(5/2)*r^(1/2) - C*(Z*alpha)^2*Z^2`
    pub full: f64,
    /// `-C*Z^2 - C*Z^(5/2)*r^(1/2)`, the form quoted once `Z*alpha <= 2/pi`
    /// is used to absorb the coupling-dependent factors into the constant.
    pub simplified: f64,
}

/// Lower bound on the sum of negative eigenvalues of the one-electron
/// operator localized to a ball of radius `r` around a nucleus of charge
/// `Z`.  Requires subcritical coupling `Z * alpha <= 2/pi`.
pub fn dly_trace_bound(z: f64, alpha: f64, r: f64, c: f64) -> Result<DlyTraceBound> {
    check_positive("Z", z)?;
    check_positive("r", r)?;
    check_positive("C", c)?;
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "alpha must be nonnegative and finite, got {alpha}"
        )));
    }
    let za = z * alpha;
    if za > CRITICAL_COUPLING {
        return Err(Error::CriticalCoupling(format!(
            "Z*alpha = {za:.6} exceeds 2/pi = {CRITICAL_COUPLING:.6}; the trace bound requires subcritical coupling"
        )));
    }
    let z2 = z * z;
    let r_term = c * z2 * z.sqrt() * r.sqrt();
    Ok(DlyTraceBound {
        full: -c * za.sqrt() * z2 - r_term - c * za * za * z2,
        simplified: -c * z2 - r_term,
    })
}

/// Localization radius that balances the trace bound against the
/// electron-count factor: `Z^(-1) * n^(2/3)` for fermions, `Z^(-1)` with no
/// symmetry assumption.
pub fn radius_choice(z: f64, n: u64, statistics: ParticleStatistics) -> Result<f64> {
    check_positive("Z", z)?;
    if n == 0 {
        return Err(Error::domain("electron count n must be at least 1"));
    }
    Ok(match statistics {
        ParticleStatistics::Fermionic => (n as f64).powf(2.0 / 3.0) / z,
        ParticleStatistics::NoSymmetry => 1.0 / z,
    })
}

/// Upper bound `-(1 + 1/(epsilon*(1-epsilon))) * kappa(n) * Z` on the
/// derivative dE/dZ of the molecular ground energy in one nuclear charge,
/// valid on the branch where the energy is concave in Z.  The spectral
/// hypotheses behind it are recorded by the caller, not checked here.
pub fn theorem4_derivative_bound(
    n: u64,
    statistics: ParticleStatistics,
    epsilon: f64,
    tau: f64,
    z: f64,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    check_positive("Z", z)?;
    Ok(-(1.0 + 1.0 / (epsilon * (1.0 - epsilon))) * kappa(n, statistics, tau)? * z)
}

/// Lower bound `sigma * N` (no symmetry) or `sigma * N^(1/3)` (fermionic)
/// on the inverse critical separation `1/R0` scale factor; identically
/// `sigma(epsilon, tau) * kappa(N, statistics, 1)`.
pub fn r0_inverse_bound(
    n: u64,
    epsilon: f64,
    tau: f64,
    statistics: ParticleStatistics,
) -> Result<f64> {
    Ok(sigma(epsilon, tau)? * kappa(n, statistics, 1.0)?)
}

/// Output of [`theorem1_min_electrons`]: the real bound `N >= bound` and
/// its integer ceiling.  A ceiling of 0 means the constraint is vacuous
/// (any electron count is admissible).
#[derive(Debug, Clone, Copy)]
pub struct MinElectrons {
    pub bound: f64,
    pub ceiling: u64,
}

/// Left-hand side of the no-binding criterion: the largest `Q` that `N`
/// electrons can screen.  Strictly increasing in `N` for `N > 0`.
fn screening_capacity(n: f64, sig: f64, statistics: ParticleStatistics) -> f64 {
    let ratio = match statistics {
        ParticleStatistics::NoSymmetry => sig,
        ParticleStatistics::Fermionic => sig / n.powf(2.0 / 3.0),
    };
    n * (0.5 + (0.25 + 3.0 * ratio).sqrt())
}

/// Minimum electron count below which the molecule cannot bind: binding
/// requires `N * (1/2 + sqrt(1/4 + 3*sigma/N^(2/3)))  >= Q` (fermionic; the
/// `N^(2/3)` is absent with no symmetry assumption), where
/// `Q = Z1*Z2/(Z1+Z2)` is the reduced nuclear charge.
///
/// With no symmetry the bound solves in closed form,
/// `N >= Q / (1/2 + sqrt(1/4 + 3*sigma))`; the fermionic case is solved by
/// bisection on the strictly monotone left-hand side.
pub fn theorem1_min_electrons(
    z1: f64,
    z2: f64,
    epsilon: f64,
    tau: f64,
    statistics: ParticleStatistics,
) -> Result<MinElectrons> {
    check_positive("Z1", z1)?;
    check_positive("Z2", z2)?;
    let sig = sigma(epsilon, tau)?;
    let q = z1 * z2 / (z1 + z2);

    let bound = match statistics {
        ParticleStatistics::NoSymmetry => q / (0.5 + (0.25 + 3.0 * sig).sqrt()),
        ParticleStatistics::Fermionic => {
            // The capacity is at least N/2, so N = 2Q + 1 over-screens;
            // it vanishes as N -> 0, so the root is bracketed.
            let mut lo = 0.0_f64;
            let mut hi = 2.0 * q + 1.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if screening_capacity(mid, sig, statistics) < q {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * hi {
                    break;
                }
            }
            0.5 * (lo + hi)
        }
    };
    Ok(MinElectrons {
        bound,
        ceiling: bound.ceil().max(0.0) as u64,
    })
}

/// Upper bound `2*(Z1 + Z2) + 2` on the number of electrons the molecule
/// can bind.
pub fn lieb_upper_bound(z1: f64, z2: f64) -> Result<f64> {
    check_positive("Z1", z1)?;
    check_positive("Z2", z2)?;
    Ok(2.0 * (z1 + z2) + 2.0)
}

/// Binding-energy envelope and critical-separation report for the
/// equal-charge molecule at large `Z`.
///
/// The two power laws are exact rational exponents and are recorded as
/// such: the binding energy obeys `dE_b < c1 * Z^(59/30)` (that is,
/// `Z^(2 - 1/30)`), and combining it with the repulsion floor
/// `R0^(-7) <= (c0/c1)^(-1) ...` inverted as
/// `R0^(-7) <= (c0/c1) * Z^(59/30)` gives
/// `R0 >= c2 * Z^(-59/210)` with `c2 = (c1/c0)^(1/7)`.
pub fn theorem2_report(z: f64, c0: f64, c1: f64) -> Result<BoundReport> {
    check_positive("Z", z)?;
    check_positive("c0", c0)?;
    check_positive("c1", c1)?;

    let eb_exp = Rational::new(59, 30)?;
    let r0_exp = Rational::new(-59, 210)?;
    let c2 = (c1 / c0).powf(1.0 / 7.0);

    let mut report = BoundReport::new();
    report.push(entry(
        "binding_energy_envelope",
        ReportValue::Real(c1 * z.powf(eb_exp.to_f64())),
        "c1 * Z^(59/30)",
        &[
            ("Z", ReportValue::Real(z)),
            ("c1", ReportValue::Real(c1)),
        ],
        "energy",
    ))?;
    report.push(entry(
        "binding_energy_exponent",
        ReportValue::Rational(eb_exp),
        "2 - 1/30",
        &[],
        "",
    ))?;
    report.push(entry(
        "separation_constant",
        ReportValue::Real(c2),
        "(c1/c0)^(1/7)",
        &[
            ("c0", ReportValue::Real(c0)),
            ("c1", ReportValue::Real(c1)),
        ],
        "",
    ))?;
    report.push(entry(
        "separation_lower_bound",
        ReportValue::Real(c2 * z.powf(r0_exp.to_f64())),
        "(c1/c0)^(1/7) * Z^(-59/210)",
        &[
            ("Z", ReportValue::Real(z)),
            ("c0", ReportValue::Real(c0)),
            ("c1", ReportValue::Real(c1)),
        ],
        "length",
    ))?;
    report.push(entry(
        "separation_exponent",
        ReportValue::Rational(r0_exp),
        "-1/3 + 11/210",
        &[],
        "",
    ))?;
    Ok(report)
}
