//! Flag parsing, config-file merging, and pre-dispatch validation.
//!
//! Resolution precedence is flags over config file over built-in defaults.
//! The config file is a flat JSON object whose keys mirror the long flag
//! names (`{"z1": 60, "epsilon": 0.5, "statistics": "none"}`); its path
//! comes from `--config` or, failing that, the `RELMOL_CONFIG` environment
//! variable.
//!
//! Every domain rule is enforced here, before any dispatch: a rejected
//! input produces a one-line message naming the offending parameter, and
//! the process exits with code 2.  Constants the source analysis leaves
//! unspecified (`tau`, `C`, `c0`, `c1`, `sigma`, `r0`) default to 1 and are
//! listed under the `unset-by-paper` key of the config echo whenever the
//! caller did not set them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use relmol_core::bounds::{ParticleStatistics, CRITICAL_COUPLING};
use relmol_core::report::ReportValue;
use relmol_core::tf::diatomic::{self, DiatomicMesh};
use relmol_core::tf::scott::{ScottParameters, ScottTable};
use relmol_core::verify::SUITE_NAMES;

#[derive(Parser)]
#[command(
    name = "relmol",
    version,
    about = "Bound reports, invariant suites, and solvers for a relativistic model of diatomic molecules"
)]
pub struct Cli {
    #[command(subcommand)]
    command: CommandLine,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Flat-JSON config file; defaults to the path in $RELMOL_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for the randomized invariant checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Omit wall-clock timings, making the output byte-stable across runs.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum CommandLine {
    /// Run invariant suites: kernel, localization, herbst, bounds, tf, or all.
    Verify {
        /// Suite name (defaults to "all").
        suite: Option<String>,
    },
    /// Evaluate the stability-bound family for a two-nucleus system.
    Bounds(BoundsArgs),
    /// Solve the neutral Thomas-Fermi atom.
    TfAtom(TfAtomArgs),
    /// Solve the neutral Thomas-Fermi diatomic molecule.
    TfDiatomic(TfDiatomicArgs),
    /// Scan separations and fit the large-separation interaction power law.
    TfFit(TfFitArgs),
    /// Ground-state energy of the one-electron relativistic ion.
    HerbstGround(HerbstGroundArgs),
    /// Dilation-orbit scan probing boundedness from below (supercritical allowed).
    HerbstScan(HerbstScanArgs),
    /// Scott-corrected molecular energy assembly.
    Scott(ScottArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Charge of the first (larger) nucleus.
    #[arg(long)]
    z1: Option<f64>,
    /// Charge of the second nucleus.
    #[arg(long)]
    z2: Option<f64>,
    /// Splitting parameter of the bound family, in (0, 1).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Scale constant of kappa (defaults to 1, unset-by-paper).
    #[arg(long)]
    tau: Option<f64>,
    /// Exchange statistics: fermionic or none.
    #[arg(long)]
    statistics: Option<String>,
    /// Electron count; enables the per-N bounds (kappa, lemma 3, radius,
    /// derivative, inverse-separation scale).
    #[arg(long)]
    n: Option<u64>,
    /// Fine-structure constant; with --radius enables the localized trace bound.
    #[arg(long)]
    alpha: Option<f64>,
    /// Localization-ball radius for the trace bound (uses Z1).
    #[arg(long)]
    radius: Option<f64>,
    /// Trace-bound constant C (defaults to 1, unset-by-paper).
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct TfAtomArgs {
    /// Nuclear charge.
    #[arg(long)]
    z: Option<f64>,
}

#[derive(Args)]
struct MeshArgs {
    /// Node spacing of the cylindrical mesh.
    #[arg(long)]
    mesh_spacing: Option<f64>,
    /// Radial extent of the solve box.
    #[arg(long)]
    mesh_radial_extent: Option<f64>,
    /// Axial half-extent of the solve box.
    #[arg(long)]
    mesh_axial_extent: Option<f64>,
    /// Initial damping of the screening fixed point, in (0, 1].
    #[arg(long)]
    mesh_damping: Option<f64>,
    /// Relative residual at which the fixed point stops.
    #[arg(long)]
    mesh_tolerance: Option<f64>,
    /// Iteration cap of the fixed point.
    #[arg(long)]
    mesh_max_iterations: Option<u64>,
}

#[derive(Args)]
struct TfDiatomicArgs {
    /// Charge of the first nucleus.
    #[arg(long)]
    z1: Option<f64>,
    /// Charge of the second nucleus.
    #[arg(long)]
    z2: Option<f64>,
    /// Internuclear separation; R/2 must land on mesh nodes.
    #[arg(long)]
    r: Option<f64>,
    #[command(flatten)]
    mesh: MeshArgs,
}

#[derive(Args)]
struct TfFitArgs {
    /// Reduced charge of the first nucleus (defaults to 1/2).
    #[arg(long)]
    z1: Option<f64>,
    /// Reduced charge of the second nucleus (defaults to 1/2).
    #[arg(long)]
    z2: Option<f64>,
    /// Comma-separated scan separations, strictly increasing.
    #[arg(long)]
    separations: Option<String>,
    /// Separation solved as the split-atoms reference energy.
    #[arg(long)]
    reference_separation: Option<f64>,
    /// Interactions below ten times this floor are dropped from the fit.
    #[arg(long)]
    noise_floor: Option<f64>,
    #[command(flatten)]
    mesh: MeshArgs,
}

#[derive(Args)]
struct HerbstGroundArgs {
    /// Nuclear charge.
    #[arg(long)]
    z1: Option<f64>,
    /// Fine-structure constant; Z1*alpha must stay below 2/pi.
    #[arg(long)]
    alpha: Option<f64>,
    /// Momentum-grid resolution.
    #[arg(long)]
    grid_nodes: Option<u64>,
}

#[derive(Args)]
struct HerbstScanArgs {
    /// Nuclear charge.
    #[arg(long)]
    z1: Option<f64>,
    /// Fine-structure constant (supercritical couplings allowed here).
    #[arg(long)]
    alpha: Option<f64>,
    /// Smallest dilation parameter.
    #[arg(long)]
    lambda_min: Option<f64>,
    /// Largest dilation parameter; the range must span at least 4 decades.
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Lower momentum cutoff of the grid.
    #[arg(long)]
    p_min: Option<f64>,
    /// Upper momentum cutoff of the grid.
    #[arg(long)]
    p_max: Option<f64>,
    /// Momentum-grid resolution.
    #[arg(long)]
    grid_nodes: Option<u64>,
}

#[derive(Args)]
struct ScottArgs {
    /// Charge of the first nucleus.
    #[arg(long)]
    z1: Option<f64>,
    /// Charge of the second nucleus.
    #[arg(long)]
    z2: Option<f64>,
    /// Internuclear separation (physical; the solve runs in reduced coordinates).
    #[arg(long)]
    r: Option<f64>,
    /// Fine-structure constant; each Z*alpha must not exceed 2/pi.
    #[arg(long)]
    alpha: Option<f64>,
    /// Envelope constant of the error half-width (defaults to 1, unset-by-paper).
    #[arg(long)]
    c0: Option<f64>,
    /// Binding-envelope constant of the separation chain (defaults to 1, unset-by-paper).
    #[arg(long)]
    c1: Option<f64>,
    /// Inverse-separation scale of the chain prerequisite (defaults to 1, unset-by-paper).
    #[arg(long)]
    sigma: Option<f64>,
    /// Smallest admissible reduced separation (defaults to 1, unset-by-paper).
    #[arg(long)]
    r0: Option<f64>,
    /// Scott-function samples "gamma:value,gamma:value,..."; defaults to the
    /// single nonrelativistic anchor S(0) = 1/4.
    #[arg(long)]
    scott_table: Option<String>,
    #[command(flatten)]
    mesh: MeshArgs,
}

/// Output format of the emitted report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Output settings shared by every command.
#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub no_timing: bool,
}

/// A fully resolved, validated run: what to execute and with which values.
pub struct RunConfig {
    pub command: &'static str,
    pub action: Action,
    pub settings: Settings,
    /// Resolved parameter values echoed into the report, flag names as keys.
    pub echo: BTreeMap<String, ReportValue>,
}

/// The validated per-command parameters.
pub enum Action {
    Verify {
        suite: String,
    },
    Bounds {
        z1: f64,
        z2: f64,
        epsilon: f64,
        tau: f64,
        statistics: ParticleStatistics,
        n: Option<u64>,
        alpha: Option<f64>,
        radius: Option<f64>,
        c: f64,
    },
    TfAtom {
        z: f64,
    },
    TfDiatomic {
        z1: f64,
        z2: f64,
        separation: f64,
        mesh: DiatomicMesh,
    },
    TfFit {
        z1: f64,
        z2: f64,
        separations: Vec<f64>,
        reference_separation: f64,
        noise_floor: f64,
        mesh: DiatomicMesh,
    },
    HerbstGround {
        z: f64,
        alpha: f64,
        nodes: usize,
    },
    HerbstScan {
        z: f64,
        alpha: f64,
        lambda_min: f64,
        lambda_max: f64,
        p_min: f64,
        p_max: f64,
        nodes: usize,
    },
    Scott {
        z1: f64,
        z2: f64,
        separation: f64,
        alpha: f64,
        table: ScottTable,
        params: ScottParameters,
        c1: f64,
        sigma: f64,
    },
}

/// The values of a loaded config file, or an empty map when none was given.
struct FileConfig {
    map: serde_json::Map<String, serde_json::Value>,
}

impl FileConfig {
    fn load(explicit: Option<&PathBuf>) -> Result<Self, String> {
        let path = match explicit {
            Some(p) => Some(p.clone()),
            None => std::env::var_os("RELMOL_CONFIG").map(PathBuf::from),
        };
        let Some(path) = path else {
            return Ok(FileConfig {
                map: serde_json::Map::new(),
            });
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("config file {} is unreadable: {e}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| format!("config file {} is not valid JSON: {e}", path.display()))?;
        match value {
            serde_json::Value::Object(map) => Ok(FileConfig { map }),
            _ => Err(format!(
                "config file {} must hold a flat JSON object",
                path.display()
            )),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>, String> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| format!("config key \"{key}\" must be a number, got {v}")),
        }
    }

    fn integer(&self, key: &str) -> Result<Option<u64>, String> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| format!("config key \"{key}\" must be a nonnegative integer, got {v}")),
        }
    }

    fn text(&self, key: &str) -> Result<Option<String>, String> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| format!("config key \"{key}\" must be a string, got {v}")),
        }
    }

    fn boolean(&self, key: &str) -> Result<Option<bool>, String> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_bool()
                .map(Some)
                .ok_or_else(|| format!("config key \"{key}\" must be a boolean, got {v}")),
        }
    }
}

fn require_real(name: &str, flag: Option<f64>, file: &FileConfig) -> Result<f64, String> {
    flag.or(file.real(name)?)
        .ok_or_else(|| format!("{name} is required (pass --{name} or set \"{name}\" in the config file)"))
}

/// Resolves an optional parameter with a default; the flag reports whether
/// the default was used (for the unset-by-paper marker).
fn real_or(
    name: &str,
    flag: Option<f64>,
    file: &FileConfig,
    default: f64,
) -> Result<(f64, bool), String> {
    match flag.or(file.real(name)?) {
        Some(v) => Ok((v, false)),
        None => Ok((default, true)),
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), String> {
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("{name} must be finite and positive, got {v}"));
    }
    Ok(())
}

fn check_nonnegative(name: &str, v: f64) -> Result<(), String> {
    if !v.is_finite() || v < 0.0 {
        return Err(format!("{name} must be finite and nonnegative, got {v}"));
    }
    Ok(())
}

fn check_open_unit(name: &str, v: f64) -> Result<(), String> {
    if !v.is_finite() || v <= 0.0 || v >= 1.0 {
        return Err(format!("{name} must lie in the open interval (0, 1), got {v}"));
    }
    Ok(())
}

fn echo_real(echo: &mut BTreeMap<String, ReportValue>, key: &str, v: f64) {
    echo.insert(key.to_string(), ReportValue::Real(v));
}

fn echo_int(echo: &mut BTreeMap<String, ReportValue>, key: &str, v: i64) {
    echo.insert(key.to_string(), ReportValue::Int(v));
}

fn echo_text(echo: &mut BTreeMap<String, ReportValue>, key: &str, v: &str) {
    echo.insert(key.to_string(), ReportValue::Text(v.to_string()));
}

/// Records which paper-unspecified constants were left at their defaults.
fn echo_unset_markers(echo: &mut BTreeMap<String, ReportValue>, defaulted: &[(&str, bool)]) {
    let names: Vec<&str> = defaulted
        .iter()
        .filter(|(_, was_defaulted)| *was_defaulted)
        .map(|(name, _)| *name)
        .collect();
    if !names.is_empty() {
        echo_text(echo, "unset-by-paper", &names.join(", "));
    }
}

fn resolve_mesh(
    args: &MeshArgs,
    file: &FileConfig,
    echo: &mut BTreeMap<String, ReportValue>,
) -> Result<DiatomicMesh, String> {
    let defaults = DiatomicMesh::default();
    let (spacing, _) = real_or("mesh-spacing", args.mesh_spacing, file, defaults.spacing)?;
    let (radial, _) = real_or(
        "mesh-radial-extent",
        args.mesh_radial_extent,
        file,
        defaults.radial_extent,
    )?;
    let (axial, _) = real_or(
        "mesh-axial-extent",
        args.mesh_axial_extent,
        file,
        defaults.axial_extent,
    )?;
    let (damping, _) = real_or("mesh-damping", args.mesh_damping, file, defaults.damping)?;
    let (tolerance, _) = real_or("mesh-tolerance", args.mesh_tolerance, file, defaults.tolerance)?;
    let max_iterations = args
        .mesh_max_iterations
        .or(file.integer("mesh-max-iterations")?)
        .unwrap_or(defaults.max_iterations as u64) as usize;

    echo_real(echo, "mesh-spacing", spacing);
    echo_real(echo, "mesh-radial-extent", radial);
    echo_real(echo, "mesh-axial-extent", axial);
    echo_real(echo, "mesh-damping", damping);
    echo_real(echo, "mesh-tolerance", tolerance);
    echo_int(echo, "mesh-max-iterations", max_iterations as i64);

    Ok(DiatomicMesh {
        spacing,
        radial_extent: radial,
        axial_extent: axial,
        damping,
        tolerance,
        max_iterations,
    })
}

fn parse_statistics(text: &str) -> Result<ParticleStatistics, String> {
    match text {
        "fermionic" => Ok(ParticleStatistics::Fermionic),
        "none" => Ok(ParticleStatistics::NoSymmetry),
        other => Err(format!(
            "statistics must be \"fermionic\" or \"none\", got {other:?}"
        )),
    }
}

fn parse_scott_table(text: &str) -> Result<ScottTable, String> {
    let mut samples = Vec::new();
    for (i, piece) in text.split(',').enumerate() {
        let Some((g, v)) = piece.split_once(':') else {
            return Err(format!(
                "scott-table entry {i} ({piece:?}) must look like \"gamma:value\""
            ));
        };
        let gamma: f64 = g
            .trim()
            .parse()
            .map_err(|_| format!("scott-table entry {i}: coupling {g:?} is not a number"))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| format!("scott-table entry {i}: value {v:?} is not a number"))?;
        samples.push((gamma, value));
    }
    ScottTable::new(&samples).map_err(|e| format!("scott-table: {e}"))
}

fn parse_separations(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (i, piece) in text.split(',').enumerate() {
        let r: f64 = piece
            .trim()
            .parse()
            .map_err(|_| format!("separations entry {i} ({piece:?}) is not a number"))?;
        out.push(r);
    }
    if out.len() < 2 {
        return Err(format!(
            "separations needs at least two scan points, got {}",
            out.len()
        ));
    }
    for pair in out.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err("separations must be strictly increasing".to_string());
        }
    }
    Ok(out)
}

/// Turns parsed flags into a validated [`RunConfig`].  Every error message
/// is a single line naming the offending parameter; the caller prints it
/// and exits with code 2.
pub fn resolve(cli: Cli) -> Result<RunConfig, String> {
    let file = FileConfig::load(cli.common.config.as_ref())?;

    let format = match cli
        .common
        .format
        .or(file.text("format")?)
        .unwrap_or_else(|| "json".to_string())
        .as_str()
    {
        "json" => Format::Json,
        "csv" => Format::Csv,
        other => return Err(format!("format must be \"json\" or \"csv\", got {other:?}")),
    };
    let output = cli
        .common
        .output
        .or(file.text("output")?.map(PathBuf::from));
    let seed = cli.common.seed.or(file.integer("seed")?).unwrap_or(0);
    let no_timing = cli.common.no_timing || file.boolean("no-timing")?.unwrap_or(false);
    let settings = Settings {
        format,
        output,
        seed,
        no_timing,
    };

    let mut echo = BTreeMap::new();
    echo_text(
        &mut echo,
        "format",
        if settings.format == Format::Json { "json" } else { "csv" },
    );
    echo_int(&mut echo, "seed", seed as i64);

    let (command, action) = match &cli.command {
        CommandLine::Verify { suite } => {
            let suite = suite
                .clone()
                .or(file.text("suite")?)
                .unwrap_or_else(|| "all".to_string());
            if suite != "all" && !SUITE_NAMES.contains(&suite.as_str()) {
                return Err(format!(
                    "suite must be one of kernel, localization, herbst, bounds, tf, all; got {suite:?}"
                ));
            }
            echo_text(&mut echo, "suite", &suite);
            ("verify", Action::Verify { suite })
        }

        CommandLine::Bounds(args) => {
            let z1 = require_real("z1", args.z1, &file)?;
            let z2 = require_real("z2", args.z2, &file)?;
            check_positive("z1", z1)?;
            check_positive("z2", z2)?;
            let (epsilon, _) = real_or("epsilon", args.epsilon, &file, 0.5)?;
            check_open_unit("epsilon", epsilon)?;
            let (tau, tau_defaulted) = real_or("tau", args.tau, &file, 1.0)?;
            check_positive("tau", tau)?;
            let statistics_text = args
                .statistics
                .clone()
                .or(file.text("statistics")?)
                .unwrap_or_else(|| "fermionic".to_string());
            let statistics = parse_statistics(&statistics_text)?;
            let n = args.n.or(file.integer("n")?);
            if let Some(n) = n {
                if n < 1 {
                    return Err(format!("n must be at least 1, got {n}"));
                }
            }
            let alpha = args.alpha.or(file.real("alpha")?);
            if let Some(alpha) = alpha {
                check_nonnegative("alpha", alpha)?;
            }
            let radius = args.radius.or(file.real("radius")?);
            if let Some(radius) = radius {
                check_positive("radius", radius)?;
            }
            let (c, c_defaulted) = real_or("c", args.c, &file, 1.0)?;
            check_positive("c", c)?;
            if let (Some(alpha), Some(_)) = (alpha, radius) {
                if z1 * alpha > CRITICAL_COUPLING {
                    return Err(format!(
                        "z1*alpha = {:.6} exceeds the critical coupling 2/pi = {CRITICAL_COUPLING:.6} required by the trace bound",
                        z1 * alpha
                    ));
                }
            }

            echo_real(&mut echo, "z1", z1);
            echo_real(&mut echo, "z2", z2);
            echo_real(&mut echo, "epsilon", epsilon);
            echo_real(&mut echo, "tau", tau);
            echo_text(&mut echo, "statistics", &statistics_text);
            if let Some(n) = n {
                echo_int(&mut echo, "n", n as i64);
            }
            if let Some(alpha) = alpha {
                echo_real(&mut echo, "alpha", alpha);
            }
            if let Some(radius) = radius {
                echo_real(&mut echo, "radius", radius);
            }
            let dly_active = alpha.is_some() && radius.is_some();
            if dly_active {
                echo_real(&mut echo, "c", c);
            }
            echo_unset_markers(
                &mut echo,
                &[("tau", tau_defaulted), ("C", dly_active && c_defaulted)],
            );

            (
                "bounds",
                Action::Bounds {
                    z1,
                    z2,
                    epsilon,
                    tau,
                    statistics,
                    n,
                    alpha,
                    radius,
                    c,
                },
            )
        }

        CommandLine::TfAtom(args) => {
            let z = require_real("z", args.z, &file)?;
            check_positive("z", z)?;
            echo_real(&mut echo, "z", z);
            ("tf-atom", Action::TfAtom { z })
        }

        CommandLine::TfDiatomic(args) => {
            let z1 = require_real("z1", args.z1, &file)?;
            let z2 = require_real("z2", args.z2, &file)?;
            let separation = require_real("r", args.r, &file)?;
            let mesh = resolve_mesh(&args.mesh, &file, &mut echo)?;
            diatomic::validate_inputs(z1, z2, separation, &mesh).map_err(|e| e.to_string())?;
            echo_real(&mut echo, "z1", z1);
            echo_real(&mut echo, "z2", z2);
            echo_real(&mut echo, "r", separation);
            (
                "tf-diatomic",
                Action::TfDiatomic {
                    z1,
                    z2,
                    separation,
                    mesh,
                },
            )
        }

        CommandLine::TfFit(args) => {
            let (z1, _) = real_or("z1", args.z1, &file, 0.5)?;
            let (z2, _) = real_or("z2", args.z2, &file, 0.5)?;
            let separations_text = args
                .separations
                .clone()
                .or(file.text("separations")?)
                .unwrap_or_else(|| "4,5,6,8,10".to_string());
            let separations = parse_separations(&separations_text)?;
            let (reference_separation, _) =
                real_or("reference-separation", args.reference_separation, &file, 20.0)?;
            if reference_separation <= *separations.last().unwrap() {
                return Err(format!(
                    "reference-separation ({reference_separation}) must exceed the largest scanned separation ({})",
                    separations.last().unwrap()
                ));
            }
            let (noise_floor, _) = real_or("noise-floor", args.noise_floor, &file, 1e-6)?;
            check_positive("noise-floor", noise_floor)?;
            let mesh = resolve_mesh(&args.mesh, &file, &mut echo)?;
            for &r in separations.iter().chain([&reference_separation]) {
                diatomic::validate_inputs(z1, z2, r, &mesh).map_err(|e| e.to_string())?;
            }
            echo_real(&mut echo, "z1", z1);
            echo_real(&mut echo, "z2", z2);
            echo_text(&mut echo, "separations", &separations_text);
            echo_real(&mut echo, "reference-separation", reference_separation);
            echo_real(&mut echo, "noise-floor", noise_floor);
            (
                "tf-fit",
                Action::TfFit {
                    z1,
                    z2,
                    separations,
                    reference_separation,
                    noise_floor,
                    mesh,
                },
            )
        }

        CommandLine::HerbstGround(args) => {
            let z = require_real("z1", args.z1, &file)?;
            check_positive("z1", z)?;
            let alpha = require_real("alpha", args.alpha, &file)?;
            check_nonnegative("alpha", alpha)?;
            if z * alpha >= CRITICAL_COUPLING {
                return Err(format!(
                    "z1*alpha = {:.6} is at or beyond the critical coupling 2/pi = {CRITICAL_COUPLING:.6}; the ground state exists only below it",
                    z * alpha
                ));
            }
            let nodes = args.grid_nodes.or(file.integer("grid-nodes")?).unwrap_or(600);
            if nodes < 64 {
                return Err(format!("grid-nodes must be at least 64, got {nodes}"));
            }
            echo_real(&mut echo, "z1", z);
            echo_real(&mut echo, "alpha", alpha);
            echo_int(&mut echo, "grid-nodes", nodes as i64);
            (
                "herbst-ground",
                Action::HerbstGround {
                    z,
                    alpha,
                    nodes: nodes as usize,
                },
            )
        }

        CommandLine::HerbstScan(args) => {
            let z = require_real("z1", args.z1, &file)?;
            check_positive("z1", z)?;
            let alpha = require_real("alpha", args.alpha, &file)?;
            check_nonnegative("alpha", alpha)?;
            let (lambda_min, _) = real_or("lambda-min", args.lambda_min, &file, 1e-2)?;
            check_positive("lambda-min", lambda_min)?;
            let (lambda_max, _) = real_or("lambda-max", args.lambda_max, &file, 1e6)?;
            check_positive("lambda-max", lambda_max)?;
            if lambda_max / lambda_min < 1e4 {
                return Err(format!(
                    "lambda-max/lambda-min must span at least 4 decades, got {:.2e}",
                    lambda_max / lambda_min
                ));
            }
            let (p_min, _) = real_or("p-min", args.p_min, &file, 1e-4)?;
            check_positive("p-min", p_min)?;
            let (p_max, _) = real_or("p-max", args.p_max, &file, 1e4)?;
            if !(p_max.is_finite() && p_max > p_min) {
                return Err(format!("p-max must exceed p-min, got {p_max} vs {p_min}"));
            }
            let nodes = args.grid_nodes.or(file.integer("grid-nodes")?).unwrap_or(512);
            if nodes < 64 {
                return Err(format!("grid-nodes must be at least 64, got {nodes}"));
            }
            echo_real(&mut echo, "z1", z);
            echo_real(&mut echo, "alpha", alpha);
            echo_real(&mut echo, "lambda-min", lambda_min);
            echo_real(&mut echo, "lambda-max", lambda_max);
            echo_real(&mut echo, "p-min", p_min);
            echo_real(&mut echo, "p-max", p_max);
            echo_int(&mut echo, "grid-nodes", nodes as i64);
            (
                "herbst-scan",
                Action::HerbstScan {
                    z,
                    alpha,
                    lambda_min,
                    lambda_max,
                    p_min,
                    p_max,
                    nodes: nodes as usize,
                },
            )
        }

        CommandLine::Scott(args) => {
            let z1 = require_real("z1", args.z1, &file)?;
            let z2 = require_real("z2", args.z2, &file)?;
            check_positive("z1", z1)?;
            check_positive("z2", z2)?;
            let separation = require_real("r", args.r, &file)?;
            check_positive("r", separation)?;
            let (alpha, _) = real_or("alpha", args.alpha, &file, 0.0)?;
            check_nonnegative("alpha", alpha)?;
            let gamma_max = z1.max(z2) * alpha;
            if gamma_max > CRITICAL_COUPLING + 1e-12 {
                return Err(format!(
                    "max(Z)*alpha = {gamma_max:.6} exceeds the critical coupling 2/pi = {CRITICAL_COUPLING:.6}"
                ));
            }
            let (c0, c0_defaulted) = real_or("c0", args.c0, &file, 1.0)?;
            check_positive("c0", c0)?;
            let (c1, c1_defaulted) = real_or("c1", args.c1, &file, 1.0)?;
            check_positive("c1", c1)?;
            let (sigma, sigma_defaulted) = real_or("sigma", args.sigma, &file, 1.0)?;
            check_positive("sigma", sigma)?;
            let (r0, r0_defaulted) = real_or("r0", args.r0, &file, 1.0)?;
            check_positive("r0", r0)?;
            let table_text = args.scott_table.clone().or(file.text("scott-table")?);
            let table = match &table_text {
                Some(text) => parse_scott_table(text)?,
                None => ScottTable::default(),
            };
            let mesh = resolve_mesh(&args.mesh, &file, &mut echo)?;
            let z_total = z1 + z2;
            let reduced = z_total.cbrt() * separation;
            if reduced <= r0 {
                return Err(format!(
                    "r is too small: the reduced separation Z^(1/3)*r = {reduced:.6} must exceed r0 = {r0}"
                ));
            }
            diatomic::validate_inputs(z1.max(z2) / z_total, z1.min(z2) / z_total, reduced, &mesh)
                .map_err(|e| e.to_string())?;

            echo_real(&mut echo, "z1", z1);
            echo_real(&mut echo, "z2", z2);
            echo_real(&mut echo, "r", separation);
            echo_real(&mut echo, "alpha", alpha);
            echo_real(&mut echo, "c0", c0);
            echo_real(&mut echo, "c1", c1);
            echo_real(&mut echo, "sigma", sigma);
            echo_real(&mut echo, "r0", r0);
            echo_text(
                &mut echo,
                "scott-table",
                table_text.as_deref().unwrap_or("nonrelativistic-default"),
            );
            echo_unset_markers(
                &mut echo,
                &[
                    ("c0", c0_defaulted),
                    ("c1", c1_defaulted),
                    ("sigma", sigma_defaulted),
                    ("r0", r0_defaulted),
                ],
            );

            (
                "scott",
                Action::Scott {
                    z1,
                    z2,
                    separation,
                    alpha,
                    table,
                    params: ScottParameters { r0, c0, mesh },
                    c1,
                    sigma,
                },
            )
        }
    };

    Ok(RunConfig {
        command,
        action,
        settings,
        echo,
    })
}
