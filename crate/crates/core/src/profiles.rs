//! Longitudinal profiles of the Allen-Eberly coupler.
//!
//! The mismatch and coupling follow
//!
//! ```text
//! Δ(z) = Δ₀ tanh(2πz/L)        κ(z) = κ₀ sech(2πz/L)
//! ```
//!
//! over `z ∈ [−L, L]`. The mixing angle `θ = atan2(κ, Δ)` sweeps continuously
//! from just below π at the input to just above 0 at the output. A
//! counterdiabatic coupling `κ_a` can be added in quadrature with a relative
//! phase; the pair is then described by `κ_eff = √(κ² + κ_a²)` and the phase
//! `φ = atan2(κ_a, κ)`, whose rate shifts the diagonal to `Δ_eff = Δ − φ̇/2`.
//!
//! Units are mm for lengths and mm⁻¹ for Δ, κ and κ_a throughout.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{positive, CouplerError, Result};

/// Ratio `L / z₀` used for the default Gaussian width.
///
/// `exp(−2.63²) ≈ 9.91e-4`, so the Gaussian has fallen below 10⁻³ of its
/// peak at both ends of the device.
pub const DEFAULT_WIDTH_RATIO: f64 = 2.63;

/// Largest allowed `κ_a(±L) / κ_a(0)` for a Gaussian counterdiabatic term.
pub const GAUSSIAN_BOUNDARY_LIMIT: f64 = 1e-3;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// The `(Δ₀, κ₀, L)` triple of an Allen-Eberly coupler spanning `[−L, L]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllenEberlyScheme {
    delta0: f64,
    kappa0: f64,
    half_length: f64,
}

impl AllenEberlyScheme {
    pub fn new(delta0: f64, kappa0: f64, half_length: f64) -> Result<Self> {
        Ok(Self {
            delta0: positive("delta0", delta0)?,
            kappa0: positive("kappa0", kappa0)?,
            half_length: positive("half_length", half_length)?,
        })
    }

    /// Builds a scheme from the total device length `2L`.
    pub fn with_total_length(delta0: f64, kappa0: f64, total_length: f64) -> Result<Self> {
        positive("length", total_length)?;
        Self::new(delta0, kappa0, total_length / 2.0)
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn total_length(&self) -> f64 {
        2.0 * self.half_length
    }

    /// `2π/L`, the rate at which the profile argument advances with z.
    fn wavenumber(&self) -> f64 {
        2.0 * PI / self.half_length
    }

    fn argument(&self, z: f64) -> f64 {
        self.wavenumber() * z
    }

    /// Propagation-constant mismatch Δ(z); odd in z.
    pub fn mismatch_at(&self, z: f64) -> f64 {
        self.delta0 * self.argument(z).tanh()
    }

    /// Coupling κ(z); even in z and strictly positive.
    pub fn coupling_at(&self, z: f64) -> f64 {
        self.kappa0 * sech(self.argument(z))
    }

    /// Mixing angle θ(z) = atan2(κ, Δ) ∈ (0, π).
    pub fn mixing_angle(&self, z: f64) -> Result<f64> {
        let delta = self.mismatch_at(z);
        let kappa = self.coupling_at(z);
        if delta == 0.0 && kappa == 0.0 {
            return Err(CouplerError::DegenerateField {
                z,
                what: "mismatch and coupling both vanish",
            });
        }
        Ok(kappa.atan2(delta))
    }

    /// Closed-form dθ/dz.
    ///
    /// `θ̇ = −(2π/L) Δ₀κ₀ sech u / (Δ₀² tanh²u + κ₀² sech²u)`, `u = 2πz/L`.
    pub fn mixing_angle_rate(&self, z: f64) -> Result<f64> {
        let u = self.argument(z);
        let (s, t) = (sech(u), u.tanh());
        let denom = self.gap_squared(s, t);
        if denom == 0.0 {
            return Err(CouplerError::DegenerateField {
                z,
                what: "mismatch and coupling both vanish",
            });
        }
        Ok(-self.wavenumber() * self.delta0 * self.kappa0 * s / denom)
    }

    /// Closed-form d²θ/dz², needed for the phase rate of the exact shortcut.
    fn mixing_angle_curvature(&self, z: f64) -> f64 {
        let u = self.argument(z);
        let (s, t) = (sech(u), u.tanh());
        let denom = self.gap_squared(s, t);
        let w = self.wavenumber();
        let spread = self.delta0 * self.delta0 - self.kappa0 * self.kappa0;
        w * w * self.delta0 * self.kappa0 * s * t * (denom + 2.0 * s * s * spread)
            / (denom * denom)
    }

    fn coupling_rate(&self, z: f64) -> f64 {
        let u = self.argument(z);
        -self.kappa0 * self.wavenumber() * sech(u) * u.tanh()
    }

    /// Δ² + κ² written in terms of `s = sech u`, `t = tanh u`.
    fn gap_squared(&self, s: f64, t: f64) -> f64 {
        let d = self.delta0 * t;
        let k = self.kappa0 * s;
        d * d + k * k
    }

    /// `|θ̇|/2 ÷ √(Δ² + κ²)`; values ≪ 1 mean the local evolution is adiabatic.
    pub fn adiabaticity_ratio(&self, z: f64) -> Result<f64> {
        let rate = self.mixing_angle_rate(z)?;
        let gap = self.mismatch_at(z).hypot(self.coupling_at(z));
        Ok(rate.abs() / 2.0 / gap)
    }

    /// Gaussian width used when none is given explicitly: `L / 2.63`.
    pub fn default_gaussian_width(&self) -> f64 {
        self.half_length / DEFAULT_WIDTH_RATIO
    }
}

/// Which counterdiabatic coupling κ_a(z) is added to the coupler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CounterdiabaticSpec {
    /// Plain adiabatic coupler, κ_a = 0.
    Off,
    /// Exact transitionless driving, κ_a = θ̇/2 (signed).
    Exact,
    /// Gaussian approximation κ_a = amplitude·exp(−z²/width²).
    Gaussian { amplitude: f64, width: f64 },
}

impl CounterdiabaticSpec {
    /// Gaussian term with the default amplitude κ₀ and width `L / 2.63`.
    pub fn default_gaussian(scheme: &AllenEberlyScheme) -> Self {
        CounterdiabaticSpec::Gaussian {
            amplitude: scheme.kappa0(),
            width: scheme.default_gaussian_width(),
        }
    }

    /// Checks the Gaussian parameters against the device they will drive.
    pub fn validate(&self, scheme: &AllenEberlyScheme) -> Result<()> {
        if let CounterdiabaticSpec::Gaussian { amplitude, width } = *self {
            positive("cd_amplitude", amplitude)?;
            positive("z0", width)?;
            let l = scheme.half_length();
            let residual = (-(l * l) / (width * width)).exp();
            if residual > GAUSSIAN_BOUNDARY_LIMIT {
                return Err(CouplerError::InvalidParameter {
                    name: "z0",
                    reason: format!(
                        "Gaussian width {width} mm leaves κ_a(±L)/κ_a(0) = {residual:.3e} \
                         above {GAUSSIAN_BOUNDARY_LIMIT:e} for L = {l} mm"
                    ),
                });
            }
        }
        Ok(())
    }

    /// Counterdiabatic coupling κ_a(z).
    pub fn coupling_at(&self, scheme: &AllenEberlyScheme, z: f64) -> Result<f64> {
        match *self {
            CounterdiabaticSpec::Off => Ok(0.0),
            CounterdiabaticSpec::Exact => Ok(scheme.mixing_angle_rate(z)? / 2.0),
            CounterdiabaticSpec::Gaussian { amplitude, width } => {
                Ok(amplitude * (-(z * z) / (width * width)).exp())
            }
        }
    }

    fn coupling_rate(&self, scheme: &AllenEberlyScheme, z: f64) -> Result<f64> {
        match *self {
            CounterdiabaticSpec::Off => Ok(0.0),
            CounterdiabaticSpec::Exact => Ok(scheme.mixing_angle_curvature(z) / 2.0),
            CounterdiabaticSpec::Gaussian { width, .. } => {
                Ok(-2.0 * z / (width * width) * self.coupling_at(scheme, z)?)
            }
        }
    }
}

/// Combined coupling `κ + iκ_a = κ_eff·e^{iφ}` and its consequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveQuantities {
    pub kappa_eff: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub delta_eff: f64,
}

pub fn effective_quantities(
    scheme: &AllenEberlyScheme,
    spec: &CounterdiabaticSpec,
    z: f64,
) -> Result<EffectiveQuantities> {
    let kappa = scheme.coupling_at(z);
    let kappa_a = spec.coupling_at(scheme, z)?;
    let kappa_eff = kappa.hypot(kappa_a);
    if kappa_eff == 0.0 {
        return Err(CouplerError::DegenerateField {
            z,
            what: "effective coupling vanishes, phase undefined",
        });
    }
    let phi = kappa_a.atan2(kappa);
    let phi_dot = (kappa * spec.coupling_rate(scheme, z)? - kappa_a * scheme.coupling_rate(z))
        / (kappa_eff * kappa_eff);
    Ok(EffectiveQuantities {
        kappa_eff,
        phi,
        phi_dot,
        delta_eff: scheme.mismatch_at(z) - phi_dot / 2.0,
    })
}

/// Every z-dependent scalar of the coupler at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub z: f64,
    pub delta: f64,
    pub kappa: f64,
    pub kappa_a: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub kappa_eff: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub delta_eff: f64,
}

impl ProfileSample {
    pub fn evaluate(
        scheme: &AllenEberlyScheme,
        spec: &CounterdiabaticSpec,
        z: f64,
    ) -> Result<Self> {
        let eff = effective_quantities(scheme, spec, z)?;
        Ok(Self {
            z,
            delta: scheme.mismatch_at(z),
            kappa: scheme.coupling_at(z),
            kappa_a: spec.coupling_at(scheme, z)?,
            theta: scheme.mixing_angle(z)?,
            theta_dot: scheme.mixing_angle_rate(z)?,
            kappa_eff: eff.kappa_eff,
            phi: eff.phi,
            phi_dot: eff.phi_dot,
            delta_eff: eff.delta_eff,
        })
    }
}
