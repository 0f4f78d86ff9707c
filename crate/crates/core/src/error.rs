use thiserror::Error;

/// Errors raised by the coupler model, integrators, and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CouplerError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate field at z = {z} mm: {what}")]
    DegenerateField { z: f64, what: &'static str },

    #[error("transform is not unitary (|U U† - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("norm drift {drift:e} at z = {z} mm exceeds {limit:e}; reduce the step")]
    NormDrift { z: f64, drift: f64, limit: f64 },

    #[error("trace drift {drift:e} at z = {z} mm exceeds {limit:e}; reduce the step")]
    TraceDrift { z: f64, drift: f64, limit: f64 },

    #[error("purity drift {drift:e} at z = {z} mm exceeds {limit:e}; reduce the step")]
    PurityDrift { z: f64, drift: f64, limit: f64 },

    #[error("convergence order indeterminate: successive differences {first:e}, {second:e} are at round-off level")]
    Indeterminate { first: f64, second: f64 },

    #[error("transfer threshold {threshold} not reached for any total length up to {max_length} mm")]
    NotReached { threshold: f64, max_length: f64 },
}

pub type Result<T> = std::result::Result<T, CouplerError>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CouplerError::InvalidParameter {
            name,
            reason: format!("must be a finite positive number, got {value}"),
        })
    }
}
