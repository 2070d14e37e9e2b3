//! Numerical kernels for the stability analysis of diatomic molecules in a
//! relativistic one-particle model.
//!
//! The crate is organized around the objects that the analysis actually
//! manipulates:
//!
//! * [`quad`] — adaptive Gauss–Kronrod and double-exponential quadrature used
//!   by every integral in the crate.
//! * [`bessel`] — the modified Bessel function `K2` through its integral
//!   representation, plus the heat-kernel mass identities built on it.
//! * [`kernel`] — the off-diagonal localization kernel of the relativistic
//!   kinetic energy and the quadratic error form it generates.
//! * [`localization`] — the two-center partition of unity, its gradient
//!   identities, and the attraction estimate used to compare a molecule
//!   against its separated atoms.
//! * [`herbst`] — the momentum-space spectral solver for the one-particle
//!   operator `√(p²/α² + 1/α⁴) − 1/α²  −  Z/|x|`, with its critical-coupling
//!   gates and dilation (unboundedness) diagnostic.
//! * [`bounds`] — closed-form stability bounds: minimum electron number,
//!   excess-charge upper bound, Daubechies–Lieb–Yau trace bound, and the
//!   internuclear-distance chain.
//! * [`tf`] — Thomas–Fermi theory: the universal atomic profile, the
//!   axisymmetric diatomic solver, the repulsion power-law fit, and the
//!   Scott-corrected energy assembly.
//! * [`report`] — self-describing result tables (value + formula + inputs)
//!   shared by the bound calculators and the command-line tool.
//! * [`verify`] — named invariant suites that re-derive the library's
//!   frozen constants and cross-check independent code paths.
//!
//! All routines are deterministic: random sampling is done with caller-seeded
//! ChaCha generators and nothing in the crate spawns threads.

pub mod bessel;
pub mod bounds;
pub mod herbst;
pub mod kernel;
pub mod localization;
pub mod quad;
pub mod report;
pub mod tf;
pub mod verify;

/// Errors shared by every solver and calculator in the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration or quadrature failed to reach its tolerance. `residual`
    /// is the last error estimate; `history` (possibly empty) records the
    /// residual trajectory for post-mortem inspection.
    #[error("convergence failure in {what}: residual {residual:.3e} after {iterations} iterations")]
    Convergence {
        what: String,
        residual: f64,
        iterations: usize,
        history: Vec<f64>,
    },

    /// A coupling constant sits at or beyond the critical value `2/π` where
    /// the one-particle operator stops being bounded below.
    #[error("critical coupling: {0}")]
    CriticalCoupling(String),

    /// An evaluation point coincides with a non-integrable singularity.
    #[error("singular point: {0}")]
    SingularPoint(String),

    /// Inputs are individually valid but mutually inconsistent with a
    /// routine's stated precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Arguments passed in the wrong order where a convention (such as
    /// Z₁ ≥ Z₂) is required; the caller must swap labels.
    #[error("reorder required: {0}")]
    Reorder(String),

    /// Data handed to a fit carries too little signal to constrain it.
    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand used by validators.
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
