//! Time evolution of the defocusing NLW Cauchy problem by two independent
//! routes: Strang splitting around the exact linear flow, and Picard
//! iteration of the Duhamel formula.

mod energy;
mod linear;
mod picard;
mod state;
mod strang;

pub use energy::{energy_e0, energy_parts, EnergyParts};
pub use linear::{linear_propagate, propagate_spectral, sinc_symbol};
pub use picard::{picard_iterate, Contraction, PicardOutcome};
pub use state::{Scheme, SolverConfig, Trajectory, WaveState};
pub use strang::{evolve, nonlinear_kick, step_strang, wrap_horizon, SUPPORT_THRESHOLD};

pub(crate) use energy::energy_parts_spectral;
