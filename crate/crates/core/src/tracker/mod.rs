//! Modified energy, bootstrap monitoring, two radius estimators, the
//! guaranteed decay law and power-law fitting.

mod decay;
mod energy;
mod series;
mod slope;

pub use decay::{
    decay_exponent, fit_decay, radius_for_regularity, theoretical_bound, DecayFit, MIN_FIT_POINTS,
};
pub use energy::{
    bootstrap_monitor, modified_energy, radius_by_energy, radius_series_by_energy, BootstrapEntry,
    BootstrapReport, EnergyProbe, EnergyRecord, Violation, C_FACTOR, DEFAULT_TOL, H_FACTOR,
};
pub use series::{Estimator, RadiusEntry, RadiusSeries};
pub use slope::{
    estimators_disagree, radius_by_slope, slope_diagnostic, slope_fit, SlopeDiagnostic, SlopeFit,
    ESTIMATOR_DISAGREEMENT, MIN_SHELLS, ROUNDOFF_FLOOR, SUPEREXPONENTIAL_SPREAD,
};
