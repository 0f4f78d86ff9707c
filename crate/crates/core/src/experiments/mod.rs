//! Reproducible experiments over the coupler: profile reports, power traces,
//! κ₀ × L transfer maps, efficiency-versus-length curves and minimum
//! switching lengths.
//!
//! Independent runs (sweep cells, curve points, scan candidates) are evaluated
//! with rayon and merged by index, so results never depend on the number of
//! worker threads.

pub mod table;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{positive, CouplerError, Result};
use crate::profiles::{AllenEberlyScheme, CounterdiabaticSpec, ProfileSample};
use crate::propagation::{
    propagate_amplitudes, propagate_density, Amplitudes, CouplerPath, DensityMatrix2, Frame,
    Representation, Trajectory, ZGrid, DEFAULT_STEPS,
};

/// Transfer regarded as a complete switch when nothing else is requested.
pub const DEFAULT_THRESHOLD: f64 = 0.99;
/// Upper bound on the total length searched by [`minimum_switch_length`].
pub const DEFAULT_MAX_TOTAL_LENGTH: f64 = 50.0;
/// Allowed shortfall of the Gaussian shortcut against the adiabatic coupler
/// before a sweep cell is flagged.
pub const MODE_ORDERING_TOLERANCE: f64 = 1e-3;

/// Which coupler is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CouplerMode {
    Adiabatic,
    StaExact,
    /// Gaussian shortcut; unset fields fall back to κ₀ and `L / 2.63` per device.
    StaGauss { amplitude: Option<f64>, z0: Option<f64> },
}

impl CouplerMode {
    pub fn sta_gauss() -> Self {
        CouplerMode::StaGauss { amplitude: None, z0: None }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CouplerMode::Adiabatic => "adiabatic",
            CouplerMode::StaExact => "sta-exact",
            CouplerMode::StaGauss { .. } => "sta-gauss",
        }
    }

    /// Column-friendly form of [`CouplerMode::name`].
    pub fn column(&self) -> String {
        self.name().replace('-', "_")
    }

    /// Resolves the counterdiabatic term for a concrete device.
    pub fn spec_for(&self, scheme: &AllenEberlyScheme) -> Result<CounterdiabaticSpec> {
        let spec = match *self {
            CouplerMode::Adiabatic => CounterdiabaticSpec::Off,
            CouplerMode::StaExact => CounterdiabaticSpec::Exact,
            CouplerMode::StaGauss { amplitude, z0 } => CounterdiabaticSpec::Gaussian {
                amplitude: amplitude.unwrap_or(scheme.kappa0()),
                width: z0.unwrap_or(scheme.default_gaussian_width()),
            },
        };
        spec.validate(scheme)?;
        Ok(spec)
    }

    pub fn path(&self, scheme: &AllenEberlyScheme) -> Result<CouplerPath> {
        CouplerPath::new(*scheme, self.spec_for(scheme)?)
    }
}

impl fmt::Display for CouplerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CouplerMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "adiabatic" => Ok(CouplerMode::Adiabatic),
            "sta-exact" => Ok(CouplerMode::StaExact),
            "sta-gauss" => Ok(CouplerMode::sta_gauss()),
            other => Err(format!(
                "unknown mode `{other}` (expected adiabatic, sta-exact or sta-gauss)"
            )),
        }
    }
}

/// Integration step policy for one device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// Fixed number of steps across `[−L, L]`.
    Steps(usize),
    /// Largest step in mm; the device is split into `⌈2L/h⌉` equal steps.
    MaxStep(f64),
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::Steps(DEFAULT_STEPS)
    }
}

impl Resolution {
    pub fn grid(&self, scheme: &AllenEberlyScheme) -> Result<ZGrid> {
        let steps = match *self {
            Resolution::Steps(n) => n,
            Resolution::MaxStep(h) => {
                let h = positive("step", h)?;
                (scheme.total_length() / h).ceil().max(1.0) as usize
            }
        };
        ZGrid::across(scheme, steps)
    }
}

/// Power in the second guide at `z = +L` for light launched into the first.
pub fn final_transfer(
    scheme: &AllenEberlyScheme,
    mode: &CouplerMode,
    resolution: &Resolution,
) -> Result<f64> {
    let path = mode.path(scheme)?;
    let grid = resolution.grid(scheme)?;
    let grid = grid.with_stride(grid.steps());
    Ok(propagate_amplitudes(&path, Amplitudes::first_guide(), &grid)?.final_transfer())
}

/// A propagated device together with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTrace {
    pub scheme: AllenEberlyScheme,
    pub mode: CouplerMode,
    pub spec: CounterdiabaticSpec,
    pub trajectory: Trajectory,
}

impl PowerTrace {
    /// `P₂(z)/P₁(−L)`; the input power is one, so this is P₂ itself.
    pub fn fractional_power(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let input = self.trajectory.samples[0].p1;
        self.trajectory.samples.iter().map(move |s| (s.z, s.p2 / input))
    }

    pub fn final_fractional_power(&self) -> f64 {
        self.trajectory.final_transfer() / self.trajectory.samples[0].p1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    pub resolution: Resolution,
    pub stride: usize,
    pub representation: Representation,
    pub frame: Frame,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            resolution: Resolution::default(),
            stride: 1,
            representation: Representation::DensityMatrix,
            frame: Frame::Waveguide,
        }
    }
}

/// Propagates `(1, 0)` from `z = −L` to `z = +L`.
pub fn power_trace(
    scheme: &AllenEberlyScheme,
    mode: &CouplerMode,
    options: &TraceOptions,
) -> Result<PowerTrace> {
    let path = mode.path(scheme)?.in_frame(options.frame);
    let grid = options.resolution.grid(scheme)?.with_stride(options.stride);
    let initial = Amplitudes::first_guide();
    let trajectory = match options.representation {
        Representation::Amplitudes => propagate_amplitudes(&path, initial, &grid)?,
        Representation::DensityMatrix => propagate_density(&path, DensityMatrix2::pure(&initial), &grid)?,
    };
    Ok(PowerTrace { scheme: *scheme, mode: *mode, spec: path.spec, trajectory })
}

/// Uniformly spaced profile samples over `[−L, L]`, endpoints included.
pub fn profile_report(
    scheme: &AllenEberlyScheme,
    spec: &CounterdiabaticSpec,
    samples: usize,
) -> Result<Vec<ProfileSample>> {
    if samples < 2 {
        return Err(CouplerError::InvalidParameter {
            name: "samples",
            reason: format!("at least two samples are required, got {samples}"),
        });
    }
    spec.validate(scheme)?;
    let l = scheme.half_length();
    let last = samples - 1;
    (0..samples)
        .map(|i| {
            let z = match i {
                0 => -l,
                i if i == last => l,
                // Symmetric placement keeps the midpoint at exactly zero.
                i => l * (2 * i as i64 - last as i64) as f64 / last as f64,
            };
            ProfileSample::evaluate(scheme, spec, z)
        })
        .collect()
}

/// `n` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    end
                } else {
                    start + (end - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn ascending_positive(name: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(CouplerError::InvalidParameter { name, reason: "no values given".into() });
    }
    for &v in values {
        positive(name, v)?;
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CouplerError::InvalidParameter {
            name,
            reason: "values must be strictly ascending".into(),
        });
    }
    Ok(())
}

/// Axes of a κ₀ × L transfer map at fixed Δ₀.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub delta0: f64,
    pub kappa0: Vec<f64>,
    /// Half-lengths L in mm; the device spans 2L.
    pub half_length: Vec<f64>,
}

impl SweepGrid {
    pub fn new(delta0: f64, kappa0: Vec<f64>, half_length: Vec<f64>) -> Result<Self> {
        positive("delta0", delta0)?;
        ascending_positive("kappa0", &kappa0)?;
        ascending_positive("half_length", &half_length)?;
        Ok(Self { delta0, kappa0, half_length })
    }

    /// 25 × 25 grid over κ₀ ∈ [0.2, 3] mm⁻¹ and L ∈ [0.5, 12] mm at Δ₀ = 1 mm⁻¹.
    pub fn contour_default() -> Self {
        Self {
            delta0: 1.0,
            kappa0: linspace(0.2, 3.0, 25),
            half_length: linspace(0.5, 12.0, 25),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    pub mode: String,
    pub kappa0: f64,
    pub half_length: f64,
    pub error: String,
}

/// Final transfer for every `(mode, κ₀, L)`; `None` marks a failed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: SweepGrid,
    pub modes: Vec<CouplerMode>,
    /// Indexed `[mode][kappa0][half_length]`.
    pub transfer: Vec<Vec<Vec<Option<f64>>>>,
    pub failures: Vec<CellFailure>,
}

impl SweepResult {
    pub fn cell(&self, mode: usize, kappa: usize, length: usize) -> Option<f64> {
        self.transfer[mode][kappa][length]
    }

    /// Cells where the Gaussian shortcut falls more than `tolerance` below the
    /// adiabatic coupler, as `(κ₀, L, adiabatic, sta-gauss)`.
    pub fn mode_ordering_violations(&self, tolerance: f64) -> Vec<(f64, f64, f64, f64)> {
        let find = |name: &str| self.modes.iter().position(|m| m.name() == name);
        let (Some(adiabatic), Some(sta)) = (find("adiabatic"), find("sta-gauss")) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (i, &kappa0) in self.grid.kappa0.iter().enumerate() {
            for (j, &l) in self.grid.half_length.iter().enumerate() {
                if let (Some(a), Some(s)) = (self.cell(adiabatic, i, j), self.cell(sta, i, j)) {
                    if s < a - tolerance {
                        out.push((kappa0, l, a, s));
                    }
                }
            }
        }
        out
    }
}

/// Fills the κ₀ × L map for each mode. Cell failures are recorded, not fatal.
pub fn sweep_kappa_length(
    grid: &SweepGrid,
    modes: &[CouplerMode],
    resolution: &Resolution,
) -> SweepResult {
    let (nk, nl) = (grid.kappa0.len(), grid.half_length.len());
    let cells: Vec<std::result::Result<f64, CouplerError>> = (0..modes.len() * nk * nl)
        .into_par_iter()
        .map(|index| {
            let (m, rest) = (index / (nk * nl), index % (nk * nl));
            let (i, j) = (rest / nl, rest % nl);
            let scheme = AllenEberlyScheme::new(grid.delta0, grid.kappa0[i], grid.half_length[j])?;
            final_transfer(&scheme, &modes[m], resolution)
        })
        .collect();

    let mut transfer = vec![vec![vec![None; nl]; nk]; modes.len()];
    let mut failures = Vec::new();
    for (index, cell) in cells.into_iter().enumerate() {
        let (m, rest) = (index / (nk * nl), index % (nk * nl));
        let (i, j) = (rest / nl, rest % nl);
        match cell {
            Ok(p) => transfer[m][i][j] = Some(p),
            Err(e) => failures.push(CellFailure {
                mode: modes[m].name().to_string(),
                kappa0: grid.kappa0[i],
                half_length: grid.half_length[j],
                error: e.to_string(),
            }),
        }
    }
    SweepResult { grid: grid.clone(), modes: modes.to_vec(), transfer, failures }
}

/// Final transfer against total device length 2L for one mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyCurve {
    pub mode: CouplerMode,
    /// `(2L in mm, efficiency)`; `None` marks a failed point.
    pub points: Vec<(f64, Option<f64>)>,
}

pub fn efficiency_curve(
    delta0: f64,
    kappa0: f64,
    total_lengths: &[f64],
    modes: &[CouplerMode],
    resolution: &Resolution,
) -> Result<Vec<EfficiencyCurve>> {
    positive("delta0", delta0)?;
    positive("kappa0", kappa0)?;
    ascending_positive("length", total_lengths)?;
    Ok(modes
        .iter()
        .map(|mode| {
            let points = total_lengths
                .par_iter()
                .map(|&two_l| {
                    let value = AllenEberlyScheme::with_total_length(delta0, kappa0, two_l)
                        .and_then(|scheme| final_transfer(&scheme, mode, resolution))
                        .ok();
                    (two_l, value)
                })
                .collect();
            EfficiencyCurve { mode: *mode, points }
        })
        .collect())
}

/// Controls for [`minimum_switch_length`]; lengths are total lengths 2L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwitchSearch {
    pub threshold: f64,
    pub max_total_length: f64,
    /// Spacing of the coarse scan that brackets the first crossing.
    pub scan_step: f64,
    /// Width of the final bisection bracket.
    pub tolerance: f64,
    pub resolution: Resolution,
}

impl Default for SwitchSearch {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            max_total_length: DEFAULT_MAX_TOTAL_LENGTH,
            scan_step: 0.05,
            tolerance: 1e-3,
            resolution: Resolution::default(),
        }
    }
}

/// Scan batch evaluated in parallel before checking for a crossing.
const SCAN_BATCH: usize = 64;

/// Smallest total length 2L whose final transfer reaches the threshold.
///
/// Transfer is not monotone in length, so a coarse scan first locates the
/// earliest scan point at or above the threshold and bisection then narrows
/// the bracket formed with the preceding scan point. Crossings narrower than
/// the scan step can be missed.
pub fn minimum_switch_length(
    delta0: f64,
    kappa0: f64,
    mode: &CouplerMode,
    search: &SwitchSearch,
) -> Result<f64> {
    positive("delta0", delta0)?;
    positive("kappa0", kappa0)?;
    let threshold = search.threshold;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(CouplerError::InvalidParameter {
            name: "threshold",
            reason: format!("must lie strictly between 0 and 1, got {threshold}"),
        });
    }
    let max_length = positive("lmax", search.max_total_length)?;
    let scan_step = positive("scan_step", search.scan_step)?.min(max_length);
    let tolerance = positive("tolerance", search.tolerance)?;

    let transfer_at = |two_l: f64| -> Result<f64> {
        let scheme = AllenEberlyScheme::with_total_length(delta0, kappa0, two_l)?;
        final_transfer(&scheme, mode, &search.resolution)
    };

    let count = (max_length / scan_step).ceil() as usize;
    let candidate = |j: usize| if j == count { max_length } else { scan_step * j as f64 };

    let mut crossing = None;
    'scan: for batch_start in (1..=count).step_by(SCAN_BATCH) {
        let batch: Vec<usize> = (batch_start..=count).take(SCAN_BATCH).collect();
        let values = batch
            .par_iter()
            .map(|&j| transfer_at(candidate(j)))
            .collect::<Result<Vec<_>>>()?;
        for (&j, value) in batch.iter().zip(values) {
            if value >= threshold {
                crossing = Some(j);
                break 'scan;
            }
        }
    }
    let Some(j) = crossing else {
        return Err(CouplerError::NotReached { threshold, max_length });
    };

    // No length, no transfer: the bracket below the first scan point is (0, step].
    let (mut lo, mut hi) = (if j == 1 { 0.0 } else { candidate(j - 1) }, candidate(j));
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if transfer_at(mid)? >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Runs `work` on a dedicated pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T, F>(jobs: Option<usize>, work: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("failed to start worker pool")
            .install(work),
        None => work(),
    }
}
