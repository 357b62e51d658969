//! Spectral simulation and verification toolkit for the defocusing nonlinear
//! wave equation `u_tt - Lap u + |u|^{p-1} u = 0` with Gevrey-class data.
//!
//! * [`spectral`]: torus discretization, Fourier multipliers, Gevrey norms.
//! * [`lab`]: ensemble checks of the functional inequalities behind the
//!   decay estimate for the radius of analyticity.
//! * [`solver`]: Strang splitting and Picard/Duhamel time stepping.
//! * [`tracker`]: modified energy, bootstrap monitor, radius estimators and
//!   decay-law fitting.
//! * [`experiment`]: config parsing, batch runs, CSV output.

pub mod error;
pub mod experiment;
pub mod lab;
pub mod profiles;
pub mod solver;
pub mod spectral;
pub mod tracker;

pub use error::{Error, Result};

/// Crate version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
