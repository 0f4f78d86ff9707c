//! Allen-Eberly directional coupler with counterdiabatic shortcut driving.
//!
//! Two evanescently coupled waveguides obey coupled-mode equations that are
//! formally a two-level Schrödinger equation in the propagation coordinate z.
//! This crate evaluates the tanh/sech coupler profiles, builds the diabatic,
//! counterdiabatic and phase-rotated Hamiltonians, integrates the amplitude
//! and density-matrix equations, and runs the profile, trace, contour and
//! efficiency experiments behind the `sta-coupler` command-line tool.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod profiles;
pub mod propagation;

pub use error::{CouplerError, Result};
pub use hamiltonian::{HermitianMatrix2, Matrix2};
pub use profiles::{AllenEberlyScheme, CounterdiabaticSpec, ProfileSample};
pub use propagation::{Amplitudes, DensityMatrix2, Trajectory, ZGrid};
