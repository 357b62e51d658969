//! Periodic-domain Fourier toolbox: transforms, the multipliers
//! `e^{sigma|D|}<D>^s` and `|nabla|^theta`, Gevrey/Sobolev/Lebesgue norms,
//! and alias-free pointwise nonlinearities.
//!
//! The whole space is replaced by the centered torus `[-L/2, L/2)^d`. Norms
//! carry the `L^{-d}` weight on spectral sums, so the `L^2` norm agrees with
//! the quadrature norm in physical space (discrete Plancherel).

mod fft;
mod field;
mod grid;
mod multiplier;
mod norms;
mod power;

pub use field::{forward_transform, inverse_transform, PhysicalField, SpectralField};
pub use grid::{make_grid, Grid, MIN_POINTS};
pub use multiplier::{apply_multiplier, apply_physical, GevreyIndex, MultiplierSpec, OVERFLOW_GUARD};
pub use norms::{
    gevrey_norm, gevrey_norm_spectral, gradient_norm, gradient_norm_spectral, lp_norm,
    weighted_norm,
};
pub use power::{dealiased_map, dealiased_product, padded_points, pointwise_power, pure_power};

pub(crate) use field::check_same as check_same_grid;
pub(crate) use norms::lp_power;

pub use rustfft::num_complex::Complex64;
