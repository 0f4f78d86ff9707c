//! Fixed-step propagation of the coupled-mode equations along z.
//!
//! Two equivalent representations are integrated with the classical
//! fourth-order Runge-Kutta scheme:
//!
//! * amplitudes, `i da/dz = H(z) a`
//! * the density matrix, `dρ/dz = −i [H(z), ρ]`
//!
//! The coupler is lossless, so norm, trace and purity are conserved by the
//! exact flow. The integrator does not renormalise; their drift is recorded
//! in [`Diagnostics`] and turned into an error once it exceeds
//! [`DRIFT_LIMIT`], which signals a step that is too coarse.

use std::ops::Add;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CouplerError, Result};
use crate::hamiltonian::{
    effective_hamiltonian, phase_rotated_hamiltonian, HermitianMatrix2, Matrix2,
};
use crate::profiles::{AllenEberlyScheme, CounterdiabaticSpec};

/// Largest tolerated `|‖a‖² − 1|`, `|tr ρ − 1|` or `|tr ρ² − 1|` at any step.
pub const DRIFT_LIMIT: f64 = 1e-6;

/// Steps across the full device used when no step is requested.
pub const DEFAULT_STEPS: usize = 4096;

/// Anything that yields the coupler Hamiltonian at a given z.
///
/// Implementations must be pure; sweeps evaluate them from several threads.
pub trait HamiltonianPath: Sync {
    fn at(&self, z: f64) -> Result<HermitianMatrix2>;
}

impl<F> HamiltonianPath for F
where
    F: Fn(f64) -> Result<HermitianMatrix2> + Sync,
{
    fn at(&self, z: f64) -> Result<HermitianMatrix2> {
        self(z)
    }
}

/// Basis in which the driven coupler is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Waveguide basis with complex coupling `κ ∓ iκ_a`.
    Waveguide,
    /// Phase-rotated basis with real coupling κ_eff and diagonal ±Δ_eff.
    PhaseRotated,
}

/// The Allen-Eberly coupler, optionally driven by a counterdiabatic term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerPath {
    pub scheme: AllenEberlyScheme,
    pub spec: CounterdiabaticSpec,
    pub frame: Frame,
}

impl CouplerPath {
    pub fn new(scheme: AllenEberlyScheme, spec: CounterdiabaticSpec) -> Result<Self> {
        spec.validate(&scheme)?;
        Ok(Self { scheme, spec, frame: Frame::Waveguide })
    }

    pub fn in_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }
}

impl HamiltonianPath for CouplerPath {
    fn at(&self, z: f64) -> Result<HermitianMatrix2> {
        match self.frame {
            Frame::Waveguide => effective_hamiltonian(&self.scheme, &self.spec, z),
            Frame::PhaseRotated => phase_rotated_hamiltonian(&self.scheme, &self.spec, z),
        }
    }
}

/// Modal amplitudes of the two waveguides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl Amplitudes {
    pub fn new(a1: Complex64, a2: Complex64) -> Self {
        Self { a1, a2 }
    }

    /// All power launched into the first waveguide.
    pub fn first_guide() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn powers(&self) -> (f64, f64) {
        (self.a1.norm_sqr(), self.a2.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a1.conj(), self.a2.conj())
    }

    fn as_array(&self) -> [Complex64; 2] {
        [self.a1, self.a2]
    }
}

/// Density matrix `ρ_ij = a_i a_j*` of the two-guide field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(Matrix2);

/// Tolerance used when validating an initial density matrix.
const STATE_TOLERANCE: f64 = 1e-10;

impl DensityMatrix2 {
    pub fn new(rho: Matrix2) -> Result<Self> {
        let invalid = |reason: String| CouplerError::InvalidParameter { name: "initial_state", reason };
        let hermiticity = (rho - rho.adjoint()).max_abs();
        if hermiticity.is_nan() || hermiticity > STATE_TOLERANCE {
            return Err(invalid(format!("not Hermitian (deviation {hermiticity:e})")));
        }
        let state = Self(rho);
        if (state.trace() - 1.0).abs() > STATE_TOLERANCE {
            return Err(invalid(format!("trace {} differs from 1", state.trace())));
        }
        // For a unit-trace 2×2 Hermitian matrix, PSD ⇔ det ≥ 0.
        let det = (rho.get(0, 0) * rho.get(1, 1) - rho.get(0, 1) * rho.get(1, 0)).re;
        if det < -STATE_TOLERANCE {
            return Err(invalid(format!("not positive semidefinite (det {det:e})")));
        }
        Ok(state)
    }

    pub fn pure(a: &Amplitudes) -> Self {
        let v = a.as_array();
        Self(Matrix2::new(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        ))
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix2::from_real(0.5, 0.0, 0.0, 0.5))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn populations(&self) -> (f64, f64) {
        (self.0.get(0, 0).re, self.0.get(1, 1).re)
    }

    pub fn coherence(&self) -> Complex64 {
        self.0.get(0, 1)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }
}

/// Uniform z grid with `steps` integration steps, recording every `stride`-th.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZGrid {
    z_start: f64,
    z_end: f64,
    steps: usize,
    stride: usize,
}

impl ZGrid {
    pub fn with_steps(z_start: f64, z_end: f64, steps: usize) -> Result<Self> {
        if !(z_start.is_finite() && z_end.is_finite() && z_end > z_start) {
            return Err(CouplerError::InvalidGrid(format!(
                "need finite z_end > z_start, got [{z_start}, {z_end}]"
            )));
        }
        if steps == 0 {
            return Err(CouplerError::InvalidGrid("at least one step is required".into()));
        }
        Ok(Self { z_start, z_end, steps, stride: 1 })
    }

    /// Grid with step `h`; `(z_end − z_start)/h` must be an integer.
    pub fn with_step(z_start: f64, z_end: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(CouplerError::InvalidGrid(format!("step must be positive, got {h}")));
        }
        let count = (z_end - z_start) / h;
        let steps = count.round();
        if (count - steps).abs() > 1e-9 * count.max(1.0) {
            return Err(CouplerError::InvalidGrid(format!(
                "span {} is not an integer multiple of step {h}",
                z_end - z_start
            )));
        }
        Self::with_steps(z_start, z_end, steps as usize)
    }

    /// `[−L, L]` split into `steps` steps.
    pub fn across(scheme: &AllenEberlyScheme, steps: usize) -> Result<Self> {
        let l = scheme.half_length();
        Self::with_steps(-l, l, steps)
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    pub fn z_start(&self) -> f64 {
        self.z_start
    }

    pub fn z_end(&self) -> f64 {
        self.z_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn step(&self) -> f64 {
        (self.z_end - self.z_start) / self.steps as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k == self.steps {
            self.z_end
        } else {
            self.z_start + (self.z_end - self.z_start) * (k as f64 / self.steps as f64)
        }
    }

    fn refined(&self, factor: usize) -> Self {
        Self { steps: self.steps * factor, stride: self.steps * factor, ..*self }
    }

    fn records(&self, k: usize) -> bool {
        k.is_multiple_of(self.stride) || k == self.steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Amplitudes,
    DensityMatrix,
}

/// One recorded point of a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub z: f64,
    pub p1: f64,
    pub p2: f64,
    pub rho12: Complex64,
}

/// Conservation diagnostics of a run, maxima over every integration step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub representation: Representation,
    pub grid: ZGrid,
    pub step: f64,
    /// `|‖a‖² − 1|` or `|tr ρ − 1|`.
    pub max_norm_drift: f64,
    /// `|tr ρ² − 1|`; pure amplitude states have none to report.
    pub max_purity_drift: Option<f64>,
    /// `|ρ − ρ†|`, density runs only.
    pub max_hermiticity_error: Option<f64>,
    pub final_norm_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FinalState {
    Amplitudes(Amplitudes),
    Density(DensityMatrix2),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub diagnostics: Diagnostics,
    pub final_state: FinalState,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectories hold at least two samples")
    }

    /// Power in the second guide at the output end.
    pub fn final_transfer(&self) -> f64 {
        self.last().p2
    }
}

/// Linear-space operations the RK4 stepper needs.
trait OdeState: Copy {
    fn axpy(self, a: f64, x: Self) -> Self;
}

impl OdeState for [Complex64; 2] {
    fn axpy(self, a: f64, x: Self) -> Self {
        [self[0] + x[0] * a, self[1] + x[1] * a]
    }
}

impl OdeState for Matrix2 {
    fn axpy(self, a: f64, x: Self) -> Self {
        self.add(x.scale(Complex64::new(a, 0.0)))
    }
}

/// Drives RK4 over the grid, calling `visit` after every step with the step
/// index and new state. `H` at the step end is reused as the next step start.
fn integrate<S, F, V>(
    path: &dyn HamiltonianPath,
    grid: &ZGrid,
    initial: S,
    rhs: F,
    mut visit: V,
) -> Result<S>
where
    S: OdeState,
    F: Fn(&HermitianMatrix2, S) -> S,
    V: FnMut(usize, f64, &S) -> Result<()>,
{
    let h = grid.step();
    let mut state = initial;
    visit(0, grid.point(0), &state)?;
    let mut h_start = path.at(grid.point(0))?;
    for k in 0..grid.steps {
        let z = grid.point(k);
        let z_next = grid.point(k + 1);
        let h_mid = path.at(z + h / 2.0)?;
        let h_end = path.at(z_next)?;

        let k1 = rhs(&h_start, state);
        let k2 = rhs(&h_mid, state.axpy(h / 2.0, k1));
        let k3 = rhs(&h_mid, state.axpy(h / 2.0, k2));
        let k4 = rhs(&h_end, state.axpy(h, k3));
        state = state
            .axpy(h / 6.0, k1)
            .axpy(h / 3.0, k2)
            .axpy(h / 3.0, k3)
            .axpy(h / 6.0, k4);

        visit(k + 1, z_next, &state)?;
        h_start = h_end;
    }
    Ok(state)
}

/// Integrates `i da/dz = H(z) a` across the grid.
pub fn propagate_amplitudes(
    path: &dyn HamiltonianPath,
    initial: Amplitudes,
    grid: &ZGrid,
) -> Result<Trajectory> {
    let drift = (initial.norm_sqr() - 1.0).abs();
    if drift > STATE_TOLERANCE {
        return Err(CouplerError::InvalidParameter {
            name: "initial_state",
            reason: format!("amplitudes are not normalised (|‖a‖² − 1| = {drift:e})"),
        });
    }

    let mut samples = Vec::with_capacity(grid.steps / grid.stride + 2);
    let mut max_drift = 0.0f64;
    let mut last_drift = 0.0;
    let last = integrate(path, grid, initial.as_array(), |h, a| h.velocity(a), |k, z, a| {
        let (p1, p2) = (a[0].norm_sqr(), a[1].norm_sqr());
        let drift = (p1 + p2 - 1.0).abs();
        if drift > DRIFT_LIMIT {
            return Err(CouplerError::NormDrift { z, drift, limit: DRIFT_LIMIT });
        }
        max_drift = max_drift.max(drift);
        last_drift = drift;
        if grid.records(k) {
            samples.push(TrajectorySample { z, p1, p2, rho12: a[0] * a[1].conj() });
        }
        Ok(())
    })?;

    Ok(Trajectory {
        samples,
        diagnostics: Diagnostics {
            representation: Representation::Amplitudes,
            grid: *grid,
            step: grid.step(),
            max_norm_drift: max_drift,
            max_purity_drift: None,
            max_hermiticity_error: None,
            final_norm_drift: last_drift,
        },
        final_state: FinalState::Amplitudes(Amplitudes::new(last[0], last[1])),
    })
}

/// Integrates `dρ/dz = −i [H(z), ρ]` across the grid.
pub fn propagate_density(
    path: &dyn HamiltonianPath,
    initial: DensityMatrix2,
    grid: &ZGrid,
) -> Result<Trajectory> {
    let initial = DensityMatrix2::new(initial.0)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let initial_purity = initial.purity();

    let mut samples = Vec::with_capacity(grid.steps / grid.stride + 2);
    let (mut max_trace, mut max_purity, mut max_herm) = (0.0f64, 0.0f64, 0.0f64);
    let mut last_drift = 0.0;
    let last = integrate(
        path,
        grid,
        initial.0,
        |h, rho| h.matrix().commutator(&rho).scale(minus_i),
        |k, z, rho| {
            let state = DensityMatrix2(*rho);
            let trace_drift = (state.trace() - 1.0).abs();
            if trace_drift > DRIFT_LIMIT {
                return Err(CouplerError::TraceDrift { z, drift: trace_drift, limit: DRIFT_LIMIT });
            }
            // Purity is conserved at its initial value; for pure inputs that is 1.
            let purity_drift = (state.purity() - initial_purity).abs();
            if purity_drift > DRIFT_LIMIT {
                return Err(CouplerError::PurityDrift { z, drift: purity_drift, limit: DRIFT_LIMIT });
            }
            max_trace = max_trace.max(trace_drift);
            max_purity = max_purity.max(purity_drift);
            max_herm = max_herm.max((*rho - rho.adjoint()).max_abs());
            last_drift = trace_drift;
            if grid.records(k) {
                let (p1, p2) = state.populations();
                samples.push(TrajectorySample { z, p1, p2, rho12: state.coherence() });
            }
            Ok(())
        },
    )?;

    Ok(Trajectory {
        samples,
        diagnostics: Diagnostics {
            representation: Representation::DensityMatrix,
            grid: *grid,
            step: grid.step(),
            max_norm_drift: max_trace,
            max_purity_drift: Some(max_purity),
            max_hermiticity_error: Some(max_herm),
            final_norm_drift: last_drift,
        },
        final_state: FinalState::Density(DensityMatrix2(last)),
    })
}

/// Diabatic populations `(sin²(θ/2), cos²(θ/2))` of the adiabatic state that
/// starts in the first guide, assuming it is followed perfectly.
pub fn adiabatic_following_prediction(scheme: &AllenEberlyScheme, z: f64) -> Result<(f64, f64)> {
    let (s, c) = (scheme.mixing_angle(z)? / 2.0).sin_cos();
    Ok((s * s, c * c))
}

/// The adiabatic eigenstate `(sin θ/2, −cos θ/2)` continuously connected to
/// `(1, 0)` at the input end.
pub fn adiabatic_eigenstate(scheme: &AllenEberlyScheme, z: f64) -> Result<Amplitudes> {
    let (s, c) = (scheme.mixing_angle(z)? / 2.0).sin_cos();
    Ok(Amplitudes::new(Complex64::new(s, 0.0), Complex64::new(-c, 0.0)))
}

/// Empirical order `log₂(‖a_h − a_{h/2}‖ / ‖a_{h/2} − a_{h/4}‖)` of the
/// final amplitude vector under step halving.
///
/// The final power alone is a poor probe: it is quadratic in the amplitudes
/// and can sit at an extremum (full Rabi transfer) or be nearly insensitive
/// to phase error (adiabatic following), both of which mask the h⁴ term.
pub fn convergence_check(
    path: &dyn HamiltonianPath,
    initial: Amplitudes,
    grid: &ZGrid,
) -> Result<f64> {
    let finals = [1, 2, 4]
        .into_iter()
        .map(|factor| match propagate_amplitudes(path, initial, &grid.refined(factor))?.final_state {
            FinalState::Amplitudes(a) => Ok(a),
            FinalState::Density(_) => unreachable!("amplitude run"),
        })
        .collect::<Result<Vec<_>>>()?;
    let distance = |x: &Amplitudes, y: &Amplitudes| {
        ((x.a1 - y.a1).norm_sqr() + (x.a2 - y.a2).norm_sqr()).sqrt()
    };
    let first = distance(&finals[0], &finals[1]);
    let second = distance(&finals[1], &finals[2]);
    let floor = 10.0 * f64::EPSILON;
    if first < floor || second < floor {
        return Err(CouplerError::Indeterminate { first, second });
    }
    Ok((first / second).log2())
}
