//! Command-line front end.
//!
//! Every parameter can come from a flag or from a TOML config file (`--config`);
//! flags win. The fully resolved configuration is echoed into a JSON metadata
//! sidecar written next to the data file (`<out>.meta.json`).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CouplerError;
use crate::experiments::{
    efficiency_curve, linspace, minimum_switch_length, power_trace, profile_report,
    sweep_kappa_length, table, with_jobs, CouplerMode, Resolution, SweepGrid, SwitchSearch,
    TraceOptions, DEFAULT_MAX_TOTAL_LENGTH, DEFAULT_THRESHOLD, MODE_ORDERING_TOLERANCE,
};
use crate::profiles::{AllenEberlyScheme, DEFAULT_WIDTH_RATIO};
use crate::propagation::{Frame, Representation, DEFAULT_STEPS};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Problems with the invocation itself; always exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl UsageError {
    fn key(key: &str, reason: impl std::fmt::Display) -> Self {
        UsageError(format!("invalid value for `{key}`: {reason}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sta-coupler",
    version,
    about = "Allen-Eberly directional coupler: adiabatic and shortcut power transfer",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate Δ, κ, θ, θ̇, κ_a, κ_eff, φ, φ̇ and Δ_eff along the device.
    Profile {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of uniformly spaced samples over [−L, L].
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Propagate light launched into guide 1 and record the powers along z.
    Propagate {
        #[command(flatten)]
        common: CommonArgs,
        /// Record every N-th integration step.
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long, value_enum)]
        representation: Option<RepresentationArg>,
        #[arg(long, value_enum)]
        frame: Option<FrameArg>,
    },
    /// Final transfer over a κ₀ × 2L grid.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        ranges: RangeArgs,
    },
    /// Final transfer against total device length.
    Efficiency {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        ranges: RangeArgs,
        /// Explicit comma-separated total lengths 2L (mm); overrides the length range.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lengths: Option<Vec<f64>>,
    },
    /// Shortest total length whose final transfer reaches the threshold.
    Minlength {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest total length 2L searched (mm).
        #[arg(long, allow_negative_numbers = true)]
        lmax: Option<f64>,
        /// Spacing of the coarse length scan (mm).
        #[arg(long, allow_negative_numbers = true)]
        scan_step: Option<f64>,
    },
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// Mismatch amplitude Δ₀ (mm⁻¹).
    #[arg(long, allow_negative_numbers = true)]
    delta0: Option<f64>,
    /// Coupling amplitude κ₀ (mm⁻¹).
    #[arg(long, allow_negative_numbers = true)]
    kappa0: Option<f64>,
    /// Total device length 2L (mm).
    #[arg(long, allow_negative_numbers = true)]
    length: Option<f64>,
    /// adiabatic, sta-exact or sta-gauss; sweep and efficiency accept a comma list.
    #[arg(long, value_delimiter = ',')]
    mode: Option<Vec<String>>,
    /// Gaussian shortcut amplitude (mm⁻¹); defaults to κ₀.
    #[arg(long, allow_negative_numbers = true)]
    cd_amplitude: Option<f64>,
    /// Gaussian shortcut width z₀ (mm); defaults to L/2.63 per device.
    #[arg(long, allow_negative_numbers = true)]
    z0: Option<f64>,
    /// Largest integration step (mm); defaults to 2L/4096.
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// Transfer counted as a complete switch.
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
    /// Data file path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with default values for any of these options.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps and scans.
    #[arg(long)]
    jobs: Option<usize>,
    /// Leave the timestamp out of the metadata.
    #[arg(long)]
    no_timestamp: bool,
    /// Write the data table to standard output.
    #[arg(long)]
    stdout: bool,
}

#[derive(Debug, Args, Default)]
struct RangeArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa0_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa0_max: Option<f64>,
    #[arg(long)]
    kappa0_points: Option<usize>,
    /// Smallest total length 2L (mm).
    #[arg(long, allow_negative_numbers = true)]
    length_min: Option<f64>,
    /// Largest total length 2L (mm).
    #[arg(long, allow_negative_numbers = true)]
    length_max: Option<f64>,
    #[arg(long)]
    length_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RepresentationArg {
    Amplitudes,
    Density,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FrameArg {
    Waveguide,
    PhaseRotated,
}

/// Values accepted from a `--config` file. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    delta0: Option<f64>,
    kappa0: Option<f64>,
    length: Option<f64>,
    mode: Option<ModeList>,
    cd_amplitude: Option<f64>,
    z0: Option<f64>,
    step: Option<f64>,
    threshold: Option<f64>,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    no_timestamp: Option<bool>,
    samples: Option<usize>,
    stride: Option<usize>,
    representation: Option<String>,
    frame: Option<String>,
    kappa0_min: Option<f64>,
    kappa0_max: Option<f64>,
    kappa0_points: Option<usize>,
    length_min: Option<f64>,
    length_max: Option<f64>,
    length_points: Option<usize>,
    lengths: Option<Vec<f64>>,
    lmax: Option<f64>,
    scan_step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ModeList {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Profile,
    Propagate,
    Sweep,
    Efficiency,
    Minlength,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Profile => "profile",
            Experiment::Propagate => "propagate",
            Experiment::Sweep => "sweep",
            Experiment::Efficiency => "efficiency",
            Experiment::Minlength => "minlength",
        }
    }

    fn single_mode(&self) -> bool {
        !matches!(self, Experiment::Sweep | Experiment::Efficiency)
    }
}

/// Fully resolved run parameters; nothing is left to an implicit default.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub delta0: f64,
    pub kappa0: f64,
    /// Total device length 2L (mm).
    pub length: f64,
    pub modes: Vec<String>,
    pub cd_amplitude: Option<f64>,
    pub z0: Option<f64>,
    /// Explicit largest step (mm); `None` means `steps_per_device` steps.
    pub step: Option<f64>,
    pub steps_per_device: usize,
    pub threshold: f64,
    pub samples: usize,
    pub stride: usize,
    pub representation: Representation,
    pub frame: Frame,
    /// κ₀ axis of a sweep; empty for other experiments.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub kappa0_values: Vec<f64>,
    /// Total lengths 2L (mm) of a sweep or efficiency curve; empty otherwise.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub length_values: Vec<f64>,
    pub lmax: f64,
    pub scan_step: f64,
    pub out: Option<PathBuf>,
    pub stdout: bool,
    pub jobs: Option<usize>,
    pub timestamp: bool,
}

impl RunConfig {
    pub fn coupler_modes(&self) -> Vec<CouplerMode> {
        self.modes
            .iter()
            .map(|m| match m.parse::<CouplerMode>().expect("modes are validated on parse") {
                CouplerMode::StaGauss { .. } => CouplerMode::StaGauss {
                    amplitude: self.cd_amplitude,
                    z0: self.z0,
                },
                other => other,
            })
            .collect()
    }

    pub fn resolution(&self) -> Resolution {
        match self.step {
            Some(h) => Resolution::MaxStep(h),
            None => Resolution::Steps(self.steps_per_device),
        }
    }

    pub fn scheme(&self) -> crate::Result<AllenEberlyScheme> {
        AllenEberlyScheme::with_total_length(self.delta0, self.kappa0, self.length)
    }

    /// Data file location; `None` when writing to standard output only.
    pub fn data_path(&self) -> Option<PathBuf> {
        match (&self.out, self.stdout) {
            (Some(p), _) => Some(p.clone()),
            (None, true) => None,
            (None, false) => Some(PathBuf::from(format!("{}.csv", self.experiment.name()))),
        }
    }
}

fn positive(key: &str, value: f64) -> Result<f64, UsageError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(UsageError::key(key, format!("must be a positive number, got {value}")))
    }
}

fn at_least_one(key: &str, value: usize) -> Result<usize, UsageError> {
    if value >= 1 {
        Ok(value)
    } else {
        Err(UsageError::key(key, "must be at least 1"))
    }
}

fn parse_representation(s: &str) -> Result<Representation, UsageError> {
    match s {
        "amplitudes" => Ok(Representation::Amplitudes),
        "density" => Ok(Representation::DensityMatrix),
        other => Err(UsageError::key("representation", format!("expected amplitudes or density, got `{other}`"))),
    }
}

fn parse_frame(s: &str) -> Result<Frame, UsageError> {
    match s {
        "waveguide" => Ok(Frame::Waveguide),
        "phase-rotated" => Ok(Frame::PhaseRotated),
        other => Err(UsageError::key("frame", format!("expected waveguide or phase-rotated, got `{other}`"))),
    }
}

fn load_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config file {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| UsageError(format!("invalid config file {}: {e}", path.display())))
}

fn range(
    key: &str,
    min: f64,
    max: f64,
    points: usize,
) -> Result<Vec<f64>, UsageError> {
    positive(&format!("{key}_min"), min)?;
    positive(&format!("{key}_max"), max)?;
    at_least_one(&format!("{key}_points"), points)?;
    if points > 1 && max <= min {
        return Err(UsageError::key(&format!("{key}_max"), format!("must exceed {key}_min ({min})")));
    }
    Ok(linspace(min, max, points))
}

/// Parses arguments (program name first) and merges an optional config file.
///
/// Clap's own help and version requests surface as `Err(clap::Error)`.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, ParseFailure>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(ParseFailure::Clap)?;
    resolve(cli).map_err(ParseFailure::Usage)
}

#[derive(Debug)]
pub enum ParseFailure {
    Clap(clap::Error),
    Usage(UsageError),
}

fn resolve(cli: Cli) -> Result<RunConfig, UsageError> {
    let empty = RangeArgs::default();
    let (experiment, common, ranges) = match &cli.command {
        Command::Profile { common, .. } => (Experiment::Profile, common, &empty),
        Command::Propagate { common, .. } => (Experiment::Propagate, common, &empty),
        Command::Sweep { common, ranges } => (Experiment::Sweep, common, ranges),
        Command::Efficiency { common, ranges, .. } => (Experiment::Efficiency, common, ranges),
        Command::Minlength { common, .. } => (Experiment::Minlength, common, &empty),
    };
    let file = match &common.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };

    let delta0 = positive("delta0", common.delta0.or(file.delta0).unwrap_or(1.0))?;
    let kappa0 = positive("kappa0", common.kappa0.or(file.kappa0).unwrap_or(1.0))?;
    let length = positive("length", common.length.or(file.length).unwrap_or(4.0))?;
    let cd_amplitude = common.cd_amplitude.or(file.cd_amplitude).map(|v| positive("cd_amplitude", v)).transpose()?;
    let z0 = common.z0.or(file.z0).map(|v| positive("z0", v)).transpose()?;
    let step = common.step.or(file.step).map(|v| positive("step", v)).transpose()?;

    let threshold = common.threshold.or(file.threshold).unwrap_or(DEFAULT_THRESHOLD);
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(UsageError::key("threshold", format!("must lie strictly between 0 and 1, got {threshold}")));
    }

    let modes: Vec<String> = match (&common.mode, file.mode) {
        (Some(m), _) => m.clone(),
        (None, Some(ModeList::One(m))) => vec![m],
        (None, Some(ModeList::Many(m))) => m,
        (None, None) if experiment.single_mode() => vec!["sta-gauss".into()],
        (None, None) => vec!["adiabatic".into(), "sta-gauss".into()],
    };
    for m in &modes {
        m.parse::<CouplerMode>().map_err(|e| UsageError::key("mode", e))?;
    }
    if modes.is_empty() {
        return Err(UsageError::key("mode", "at least one mode is required"));
    }
    if experiment.single_mode() && modes.len() != 1 {
        return Err(UsageError::key("mode", format!("`{}` takes exactly one mode", experiment.name())));
    }

    let (mut samples, mut stride) = (file.samples.unwrap_or(401), file.stride.unwrap_or(1));
    let mut representation = file.representation.as_deref().map(parse_representation).transpose()?;
    let mut frame = file.frame.as_deref().map(parse_frame).transpose()?;
    let mut lengths = file.lengths.clone();
    let (mut lmax, mut scan_step) = (file.lmax, file.scan_step);
    match &cli.command {
        Command::Profile { samples: s, .. } => samples = s.unwrap_or(samples),
        Command::Propagate { stride: s, representation: r, frame: f, .. } => {
            stride = s.unwrap_or(stride);
            if let Some(r) = r {
                representation = Some(match r {
                    RepresentationArg::Amplitudes => Representation::Amplitudes,
                    RepresentationArg::Density => Representation::DensityMatrix,
                });
            }
            if let Some(f) = f {
                frame = Some(match f {
                    FrameArg::Waveguide => Frame::Waveguide,
                    FrameArg::PhaseRotated => Frame::PhaseRotated,
                });
            }
        }
        Command::Efficiency { lengths: l, .. } => lengths = l.clone().or(lengths),
        Command::Minlength { lmax: l, scan_step: s, .. } => {
            lmax = l.or(lmax);
            scan_step = s.or(scan_step);
        }
        Command::Sweep { .. } => {}
    }
    if samples < 2 {
        return Err(UsageError::key("samples", "at least two samples are required"));
    }
    at_least_one("stride", stride)?;

    let kappa0_values = match experiment {
        Experiment::Sweep => range(
            "kappa0",
            ranges.kappa0_min.or(file.kappa0_min).unwrap_or(0.2),
            ranges.kappa0_max.or(file.kappa0_max).unwrap_or(3.0),
            ranges.kappa0_points.or(file.kappa0_points).unwrap_or(25),
        )?,
        _ => Vec::new(),
    };
    let (default_min, default_max, default_points) = match experiment {
        Experiment::Efficiency => (0.5, 20.0, 40),
        _ => (1.0, 24.0, 25),
    };
    let length_values = match lengths {
        _ if experiment.single_mode() => Vec::new(),
        Some(values) => {
            for &v in &values {
                positive("lengths", v)?;
            }
            if values.is_empty() || values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(UsageError::key("lengths", "must be a non-empty ascending list"));
            }
            values
        }
        None => range(
            "length",
            ranges.length_min.or(file.length_min).unwrap_or(default_min),
            ranges.length_max.or(file.length_max).unwrap_or(default_max),
            ranges.length_points.or(file.length_points).unwrap_or(default_points),
        )?,
    };

    let jobs = common.jobs.or(file.jobs).map(|j| at_least_one("jobs", j)).transpose()?;
    Ok(RunConfig {
        experiment,
        delta0,
        kappa0,
        length,
        modes,
        cd_amplitude,
        z0,
        step,
        steps_per_device: DEFAULT_STEPS,
        threshold,
        samples,
        stride,
        representation: representation.unwrap_or(Representation::DensityMatrix),
        frame: frame.unwrap_or(Frame::Waveguide),
        kappa0_values,
        length_values,
        lmax: positive("lmax", lmax.unwrap_or(DEFAULT_MAX_TOTAL_LENGTH))?,
        scan_step: positive("scan_step", scan_step.unwrap_or(SwitchSearch::default().scan_step))?,
        out: common.out.clone().or(file.out),
        stdout: common.stdout,
        jobs,
        timestamp: !(common.no_timestamp || file.no_timestamp.unwrap_or(false)),
    })
}

/// What a run produced: the data table plus experiment-specific metadata.
struct Outcome {
    data: String,
    details: Value,
    failure: Option<CouplerError>,
}

fn gaussian_rule(config: &RunConfig) -> Value {
    json!({
        "cd_amplitude": config.cd_amplitude.map_or(json!("kappa0"), |a| json!(a)),
        "z0": config.z0.map_or(json!(format!("half_length / {DEFAULT_WIDTH_RATIO}")), |z| json!(z)),
    })
}

fn execute(config: &RunConfig) -> Result<Outcome, CouplerError> {
    let modes = config.coupler_modes();
    let resolution = config.resolution();
    match config.experiment {
        Experiment::Profile => {
            let scheme = config.scheme()?;
            let spec = modes[0].spec_for(&scheme)?;
            let samples = profile_report(&scheme, &spec, config.samples)?;
            Ok(Outcome {
                data: table::profile_csv(&samples),
                details: json!({ "scheme": scheme, "counterdiabatic": spec }),
                failure: None,
            })
        }
        Experiment::Propagate => {
            let scheme = config.scheme()?;
            let options = TraceOptions {
                resolution,
                stride: config.stride,
                representation: config.representation,
                frame: config.frame,
            };
            let trace = power_trace(&scheme, &modes[0], &options)?;
            let d = &trace.trajectory.diagnostics;
            eprintln!(
                "final fractional power P2(+L) = {:.12} (max norm drift {:.2e})",
                trace.final_fractional_power(),
                d.max_norm_drift
            );
            Ok(Outcome {
                data: table::trajectory_csv(&trace.trajectory),
                details: json!({
                    "scheme": scheme,
                    "counterdiabatic": trace.spec,
                    "integrator": { "method": "classical RK4, fixed step", "steps": d.grid.steps(), "step_mm": d.step },
                    "diagnostics": d,
                    "final_fractional_power": trace.final_fractional_power(),
                }),
                failure: None,
            })
        }
        Experiment::Sweep => {
            let grid = SweepGrid::new(
                config.delta0,
                config.kappa0_values.clone(),
                config.length_values.iter().map(|l| l / 2.0).collect(),
            )?;
            let result = with_jobs(config.jobs, || sweep_kappa_length(&grid, &modes, &resolution));
            let violations = result.mode_ordering_violations(MODE_ORDERING_TOLERANCE);
            if !result.failures.is_empty() {
                eprintln!("{} sweep cell(s) failed and are marked {}", result.failures.len(), table::MISSING);
            }
            if !violations.is_empty() {
                eprintln!(
                    "{} cell(s) where sta-gauss trails adiabatic by more than {MODE_ORDERING_TOLERANCE:e}",
                    violations.len()
                );
            }
            Ok(Outcome {
                data: table::sweep_csv(&result),
                details: json!({
                    "gaussian": gaussian_rule(config),
                    "integrator": { "method": "classical RK4, fixed step", "resolution": resolution },
                    "failed_cells": result.failures,
                    "mode_ordering_tolerance": MODE_ORDERING_TOLERANCE,
                    "mode_ordering_violations": violations
                        .iter()
                        .map(|&(k, l, a, s)| json!({ "kappa0": k, "two_L": 2.0 * l, "adiabatic": a, "sta_gauss": s }))
                        .collect::<Vec<_>>(),
                }),
                failure: None,
            })
        }
        Experiment::Efficiency => {
            let curves = with_jobs(config.jobs, || {
                efficiency_curve(config.delta0, config.kappa0, &config.length_values, &modes, &resolution)
            })?;
            Ok(Outcome {
                data: table::efficiency_csv(&curves),
                details: json!({
                    "gaussian": gaussian_rule(config),
                    "integrator": { "method": "classical RK4, fixed step", "resolution": resolution },
                }),
                failure: None,
            })
        }
        Experiment::Minlength => {
            let search = SwitchSearch {
                threshold: config.threshold,
                max_total_length: config.lmax,
                scan_step: config.scan_step,
                resolution,
                ..SwitchSearch::default()
            };
            let mode = modes[0];
            let result = with_jobs(config.jobs, || {
                minimum_switch_length(config.delta0, config.kappa0, &mode, &search)
            });
            let (length, failure) = match result {
                Ok(l) => (Some(l), None),
                Err(e @ CouplerError::NotReached { .. }) => (None, Some(e)),
                Err(e) => return Err(e),
            };
            if let Some(l) = length {
                eprintln!("minimum total length for {} at threshold {}: {l:.4} mm", mode, config.threshold);
            }
            Ok(Outcome {
                data: table::switch_length_csv(&[(mode.name().to_string(), config.threshold, length)]),
                details: json!({
                    "gaussian": gaussian_rule(config),
                    "search": search,
                    "reached": length.is_some(),
                }),
                failure,
            })
        }
    }
}

fn metadata(config: &RunConfig, details: Value, status: &str) -> Value {
    let mut meta = json!({
        "tool": "sta-coupler",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": config.experiment.name(),
        "config": config,
        "status": status,
        "details": details,
    });
    if config.timestamp {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        meta["timestamp_unix"] = json!(now);
    }
    meta
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_outputs(config: &RunConfig, outcome: &Outcome) -> std::io::Result<()> {
    if config.stdout {
        std::io::stdout().write_all(outcome.data.as_bytes())?;
    }
    if let Some(path) = config.data_path() {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(&path, &outcome.data)?;
        let status = match &outcome.failure {
            None => "ok".to_string(),
            Some(e) => format!("failed: {e}"),
        };
        let meta = metadata(config, outcome.details.clone(), &status);
        let text = serde_json::to_string_pretty(&meta).expect("metadata is plain JSON");
        fs::write(sidecar(&path), text + "\n")?;
        eprintln!("wrote {} and {}", path.display(), sidecar(&path).display());
    }
    Ok(())
}

/// Executes a resolved configuration and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let outcome = match execute(config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                CouplerError::InvalidParameter { .. } => EXIT_USAGE,
                _ => EXIT_RUNTIME,
            };
        }
    };
    if let Err(e) = write_outputs(config, &outcome) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_RUNTIME;
    }
    match &outcome.failure {
        None => EXIT_SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Entry point used by the binary: parse, run, and map failures to exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_config(args) {
        Ok(config) => run(&config),
        Err(ParseFailure::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(ParseFailure::Usage(e)) => {
            eprintln!("error: {e}");
            eprintln!("run `sta-coupler --help` for usage");
            EXIT_USAGE
        }
    }
}
