//! The universal neutral Thomas–Fermi atom.
//!
//! The screening function `phi` satisfies `phi'' = phi^(3/2) / sqrt(x)`
//! with `phi(0) = 1`, `phi(inf) = 0`; every neutral atom is this one
//! solution rescaled.  The square-root substitution `y = sqrt(x)` turns
//! the equation into `phi_yy = phi_y / y + 4 y phi^(3/2)`, which is smooth
//! at the origin, and makes the energy integrals clean: the measures
//! `x^(-1/2) dx` that appear in all of them become plain `2 dy`.
//!
//! The initial slope `phi'(0)` is found by bisection: slopes that are too
//! negative drive `phi` through zero, too-shallow ones make it turn back
//! upward, and the physical solution is the separatrix between the two.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Sommerfeld far-field coefficient: `phi(x) -> 144 / x^3`.
const TAIL_COEFFICIENT: f64 = 144.0;

/// Slope bracket for the shooting bisection; the separatrix slope lies
/// strictly inside.
const SLOPE_BRACKET: (f64, f64) = (-1.66, -1.52);

/// Thomas–Fermi length unit `b = (1/2) (3 pi / 4)^(2/3)`: the radial
/// coordinate of the charge-`Z` atom is `r = b Z^(-1/3) x`.
pub fn tf_length_scale() -> f64 {
    0.5 * (0.75 * PI).powf(2.0 / 3.0)
}

/// Shooting-mesh parameters for the universal solve.
#[derive(Debug, Clone, Copy)]
pub struct AtomMesh {
    /// Hand-off point from the series head to the integrator, in `y`.
    pub y_start: f64,
    /// Outer edge of the integration, in `y` (so `x_max = y_max^2`).
    pub y_max: f64,
    /// Number of Runge–Kutta steps between `y_start` and `y_max`.
    pub steps: usize,
    /// Bisection iterations on the initial slope.
    pub bisection_iterations: usize,
}

impl Default for AtomMesh {
    fn default() -> Self {
        AtomMesh {
            y_start: 0.02,
            y_max: 22.0,
            steps: 44_000,
            bisection_iterations: 60,
        }
    }
}

impl AtomMesh {
    fn validate(&self) -> Result<()> {
        if !(self.y_start > 0.0 && self.y_start < 0.2) {
            return Err(Error::domain(format!(
                "series hand-off y_start must lie in (0, 0.2), got {}",
                self.y_start
            )));
        }
        if !(self.y_max > 1.0 && self.y_max.is_finite()) {
            return Err(Error::domain(format!(
                "outer edge y_max must exceed 1, got {}",
                self.y_max
            )));
        }
        if self.steps < 1000 {
            return Err(Error::domain(format!(
                "shooting needs at least 1000 steps, got {}",
                self.steps
            )));
        }
        if self.bisection_iterations < 20 {
            return Err(Error::domain(format!(
                "slope bisection needs at least 20 iterations, got {}",
                self.bisection_iterations
            )));
        }
        Ok(())
    }
}

/// The universal screening function: series head near the origin, a dense
/// sampled profile in the middle, and the Sommerfeld `144/x^3` tail beyond
/// the reliable range of the shot trajectory.
#[derive(Debug, Clone)]
pub struct UniversalPhi {
    slope: f64,
    y_start: f64,
    dy: f64,
    /// `phi` at `y = y_start + i * dy`, truncated where the shot solution
    /// stops being positive and decreasing.
    values: Vec<f64>,
}

/// Series head `phi = 1 + B x + (4/3) x^(3/2) + (2/5) B x^(5/2) + x^3/3`,
/// valid for small `x`.
fn series_head(slope: f64, x: f64) -> f64 {
    let sx = x.sqrt();
    1.0 + slope * x + (4.0 / 3.0) * x * sx + 0.4 * slope * x * x * sx
        + x * x * x / 3.0
}

fn series_head_dy(slope: f64, y: f64) -> f64 {
    // d(phi)/dy with x = y^2.
    let x = y * y;
    2.0 * slope * y + 4.0 * x + 2.0 * slope * x * x + 2.0 * x * x * y
}

impl UniversalPhi {
    /// Initial slope `phi'(0)` of this profile.
    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// Largest `x` covered by the sampled profile; the analytic tail takes
    /// over beyond it.
    pub fn x_cutoff(&self) -> f64 {
        let y = self.y_start + (self.values.len() - 1) as f64 * self.dy;
        y * y
    }

    /// Evaluate `phi(x)` for any `x >= 0`.
    pub fn value(&self, x: f64) -> f64 {
        if x < self.y_start * self.y_start {
            return series_head(self.slope, x);
        }
        let y = x.sqrt();
        let t = (y - self.y_start) / self.dy;
        let i = t.floor() as usize;
        if i + 1 < self.values.len() {
            let frac = t - i as f64;
            self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
        } else {
            TAIL_COEFFICIENT / (x * x * x)
        }
    }

    /// The sampled `(x, phi)` pairs, for export.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let y = self.y_start + i as f64 * self.dy;
                (y * y, v)
            })
            .collect()
    }
}

enum Shot {
    /// `phi` crossed zero: slope too negative.
    Crossed,
    /// `phi` turned upward: slope too shallow.
    Diverged,
    /// Still positive and decreasing at the outer edge.
    Alive,
}

/// Right-hand side of the first-order system in `y`.
fn rhs(y: f64, phi: f64, psi: f64) -> (f64, f64) {
    let p = phi.max(0.0);
    (psi, psi / y + 4.0 * y * p * p.sqrt())
}

/// Integrate one trajectory; optionally record the profile.  Returns the
/// classification and the recorded values.
fn shoot(slope: f64, mesh: &AtomMesh, record: bool) -> (Shot, Vec<f64>) {
    let dy = (mesh.y_max - mesh.y_start) / mesh.steps as f64;
    let mut y = mesh.y_start;
    let mut phi = series_head(slope, y * y);
    let mut psi = series_head_dy(slope, y);
    let mut values = if record {
        let mut v = Vec::with_capacity(mesh.steps + 1);
        v.push(phi);
        v
    } else {
        Vec::new()
    };

    for _ in 0..mesh.steps {
        let (k1p, k1s) = rhs(y, phi, psi);
        let (k2p, k2s) = rhs(y + 0.5 * dy, phi + 0.5 * dy * k1p, psi + 0.5 * dy * k1s);
        let (k3p, k3s) = rhs(y + 0.5 * dy, phi + 0.5 * dy * k2p, psi + 0.5 * dy * k2s);
        let (k4p, k4s) = rhs(y + dy, phi + dy * k3p, psi + dy * k3s);
        phi += dy / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        psi += dy / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        y += dy;

        if phi <= 0.0 {
            return (Shot::Crossed, values);
        }
        if psi > 0.0 {
            return (Shot::Diverged, values);
        }
        if record {
            values.push(phi);
        }
    }
    (Shot::Alive, values)
}

/// A solved neutral atom: the universal profile plus the charge-scaled
/// energy decomposition.  `energy = kinetic + attraction + repulsion`
/// holds by construction, and the Thomas–Fermi virial theorem makes
/// `energy + kinetic` vanish up to quadrature error.
#[derive(Debug, Clone)]
pub struct TfAtomSolution {
    pub z: f64,
    /// Initial slope `phi'(0)` of the universal screening function.
    pub slope: f64,
    pub energy: f64,
    pub kinetic: f64,
    /// Electron–nucleus energy (negative).
    pub attraction: f64,
    /// Electron–electron energy (positive).
    pub repulsion: f64,
    pub phi: UniversalPhi,
}

impl TfAtomSolution {
    /// `E(Z) / Z^(7/3)`: the universal energy, `-0.7687...` in these units.
    pub fn universal_energy(&self) -> f64 {
        self.energy / self.z.powf(7.0 / 3.0)
    }
}

/// Trapezoid integral of `f(phi)` in `dy` over the full profile: series
/// head on `[0, y_start]`, the sampled mid-range, and an analytic tail
/// using `phi = 144 / y^6` with `tail_integral(y) = int_y^inf f(144/u^6) du`.
fn profile_integral(
    phi: &UniversalPhi,
    f: impl Fn(f64) -> f64,
    tail_integral: impl Fn(f64) -> f64,
) -> f64 {
    // Series head on a fine uniform grid.
    let head_n = 64;
    let hd = phi.y_start / head_n as f64;
    let mut total = 0.0;
    for i in 0..=head_n {
        let y = i as f64 * hd;
        let w = if i == 0 || i == head_n { 0.5 } else { 1.0 };
        total += w * hd * f(series_head(phi.slope, y * y));
    }
    // Sampled range.
    for (i, &v) in phi.values.iter().enumerate() {
        let w = if i == 0 || i == phi.values.len() - 1 {
            0.5
        } else {
            1.0
        };
        total += w * phi.dy * f(v);
    }
    total + tail_integral(phi.x_cutoff().sqrt())
}

/// Solve the neutral Thomas–Fermi atom of charge `Z`.
///
/// The universal equation is solved once by shooting; energies scale as
/// `Z^(7/3)` exactly, so the scaling relation holds by construction.
pub fn solve_tf_atom(z: f64, mesh: &AtomMesh) -> Result<TfAtomSolution> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!(
            "nuclear charge Z must be positive and finite, got {z}"
        )));
    }
    mesh.validate()?;

    let (mut lo, mut hi) = SLOPE_BRACKET;
    if !matches!(shoot(lo, mesh, false).0, Shot::Crossed) {
        return Err(Error::Convergence {
            what: "atom slope bracket (lower end must cross zero)".into(),
            residual: f64::NAN,
            iterations: 0,
            history: Vec::new(),
        });
    }
    if !matches!(shoot(hi, mesh, false).0, Shot::Diverged) {
        return Err(Error::Convergence {
            what: "atom slope bracket (upper end must diverge)".into(),
            residual: f64::NAN,
            iterations: 0,
            history: Vec::new(),
        });
    }
    for _ in 0..mesh.bisection_iterations {
        let mid = 0.5 * (lo + hi);
        match shoot(mid, mesh, false).0 {
            Shot::Crossed => lo = mid,
            Shot::Diverged | Shot::Alive => hi = mid,
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    let slope = 0.5 * (lo + hi);

    // Record the separatrix trajectory; it eventually peels off by the
    // residual slope error, so keep only the positive, decreasing part.
    let (_, values) = shoot(slope, mesh, true);
    let dy = (mesh.y_max - mesh.y_start) / mesh.steps as f64;
    let mut keep = values.len();
    for i in 1..values.len() {
        if values[i] <= 0.0 || values[i] >= values[i - 1] {
            keep = i;
            break;
        }
    }
    let truncated: Vec<f64> = values[..keep].to_vec();
    let y_end = mesh.y_start + (truncated.len() - 1) as f64 * dy;
    if y_end < 0.5 * mesh.y_max {
        return Err(Error::Convergence {
            what: format!(
                "atom profile lost monotonicity at y = {y_end:.2}, before half the requested span"
            ),
            residual: f64::NAN,
            iterations: mesh.bisection_iterations,
            history: Vec::new(),
        });
    }
    let phi = UniversalPhi {
        slope,
        y_start: mesh.y_start,
        dy,
        values: truncated,
    };

    // Energy integrals in y (all x-measures reduce to plain dy):
    //   kinetic    = (16 sqrt2 / 5 pi) sqrt(b) * int phi^(5/2) dy
    //   attraction = -(16 sqrt2 / 3 pi) sqrt(b) * int phi^(3/2) dy
    //   repulsion  = (1/2)(16 sqrt2 / 3 pi) sqrt(b) * int phi^(3/2)(1-phi) dy
    // Analytic tails use phi = 144 / y^6.
    let p32 = |v: f64| v * v.sqrt();
    let p52 = |v: f64| v * v * v.sqrt();
    let c: f64 = TAIL_COEFFICIENT;
    let i52 = profile_integral(&phi, |v| p52(v), |y| p52(c) / (14.0 * y.powi(14)));
    let i32_ = profile_integral(&phi, |v| p32(v), |y| p32(c) / (8.0 * y.powi(8)));
    let i31 = profile_integral(
        &phi,
        |v| p32(v) * (1.0 - v),
        |y| p32(c) / (8.0 * y.powi(8)) - p52(c) / (14.0 * y.powi(14)),
    );

    let root2 = std::f64::consts::SQRT_2;
    let sb = tf_length_scale().sqrt();
    let scale = z.powf(7.0 / 3.0);
    let kinetic = 16.0 * root2 / (5.0 * PI) * sb * i52 * scale;
    let attraction = -16.0 * root2 / (3.0 * PI) * sb * i32_ * scale;
    let repulsion = 0.5 * 16.0 * root2 / (3.0 * PI) * sb * i31 * scale;

    Ok(TfAtomSolution {
        z,
        slope,
        energy: kinetic + attraction + repulsion,
        kinetic,
        attraction,
        repulsion,
        phi,
    })
}
