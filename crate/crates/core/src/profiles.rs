//! Initial-data profiles with known analyticity radii.
//!
//! Multi-dimensional profiles are tensor products of the one-dimensional
//! ones, except the Gaussian, which is radial.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Complex64, Grid, PhysicalField, SpectralField};

/// `amplitude * exp(-|x|^2 / (2 width^2))`; entire, so its radius is infinite.
pub fn gaussian(grid: Arc<Grid>, amplitude: f64, width: f64) -> PhysicalField {
    let k = 0.5 / (width * width);
    PhysicalField::from_real_fn(grid, |x| {
        amplitude * (-k * x.iter().map(|v| v * v).sum::<f64>()).exp()
    })
}

/// `amplitude * prod_a sech(pi x_a / (2 a))`: holomorphic in `|Im x_a| < a`,
/// poles on the boundary, exponential decay in space. Transform per axis is
/// `2 a sech(a xi)`.
pub fn sech(grid: Arc<Grid>, amplitude: f64, radius: f64) -> PhysicalField {
    let b = PI / (2.0 * radius);
    PhysicalField::from_real_fn(grid, |x| {
        amplitude * x.iter().map(|v| 1.0 / (b * v).cosh()).product::<f64>()
    })
}

/// Periodization of `1 / (x^2 + a^2)` over the torus of side `period`:
/// `sum_m 1/((x + m L)^2 + a^2)` in closed form.
pub fn periodic_poisson_1d(x: f64, radius: f64, period: f64) -> f64 {
    let q = 2.0 * PI * radius / period;
    // cosh(q) - cos(y) = 2 sinh^2(q/2) + 2 sin^2(y/2), free of cancellation
    let y = 2.0 * PI * x / period;
    let denom = 2.0 * ((0.5 * q).sinh().powi(2) + (0.5 * y).sin().powi(2));
    PI / (radius * period) * q.sinh() / denom
}

/// Periodized Poisson kernel; its torus coefficients are exactly
/// `prod_a (pi / a) e^{-a |xi_a|}`.
pub fn poisson_kernel(grid: Arc<Grid>, radius: f64) -> PhysicalField {
    let ext = grid.extent().to_vec();
    PhysicalField::from_real_fn(grid, |x| {
        x.iter()
            .zip(&ext)
            .map(|(&v, &l)| periodic_poisson_1d(v, radius, l))
            .product()
    })
}

/// `amplitude * e^{i k . x}` with integer-lattice wavevector `k`.
pub fn plane_wave(grid: Arc<Grid>, amplitude: f64, k: &[i64]) -> Result<PhysicalField> {
    if k.len() != grid.dim() {
        return Err(Error::invalid("wavevector dimension does not match grid"));
    }
    let xi: Vec<f64> = k
        .iter()
        .enumerate()
        .map(|(a, &ka)| ka as f64 * grid.frequency_spacing(a))
        .collect();
    Ok(PhysicalField::from_fn(grid, |x| {
        let phase: f64 = x.iter().zip(&xi).map(|(a, b)| a * b).sum();
        Complex64::from_polar(amplitude, phase)
    }))
}

/// Field whose coefficients are exactly `amplitude * e^{-sigma |xi|}` (Nyquist zeroed).
pub fn exponential_spectrum(grid: Arc<Grid>, amplitude: f64, sigma: f64) -> PhysicalField {
    let abs_xi = grid.abs_xi().to_vec();
    let nyq = grid.nyquist_mask().to_vec();
    let coeffs = abs_xi
        .iter()
        .zip(&nyq)
        .map(|(&xi, &n)| {
            if n {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(amplitude * (-sigma * xi).exp(), 0.0)
            }
        })
        .collect();
    SpectralField::new(grid, coeffs)
        .expect("finite coefficients")
        .inverse()
}

/// Named profile used by configs and the C interface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile {
    Gaussian { amplitude: f64, width: f64 },
    Sech { amplitude: f64, radius: f64 },
    Poisson { amplitude: f64, radius: f64 },
}

impl Profile {
    pub fn sample(&self, grid: Arc<Grid>) -> PhysicalField {
        match *self {
            Profile::Gaussian { amplitude, width } => gaussian(grid, amplitude, width),
            Profile::Sech { amplitude, radius } => sech(grid, amplitude, radius),
            Profile::Poisson { amplitude, radius } => {
                poisson_kernel(grid, radius).scale(amplitude)
            }
        }
    }

    /// Analyticity radius of the profile (infinite for the Gaussian).
    pub fn radius(&self) -> f64 {
        match *self {
            Profile::Gaussian { .. } => f64::INFINITY,
            Profile::Sech { radius, .. } | Profile::Poisson { radius, .. } => radius,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn periodic_poisson_matches_image_sum() {
        // brute-force sum over images with an integral tail correction
        let (a, l) = (0.5, 10.0);
        for &x in &[0.0, 0.3, -2.0, 4.9] {
            let m_max = 20_000i64;
            let mut s = 0.0;
            for m in -m_max..=m_max {
                let y = x + m as f64 * l;
                s += 1.0 / (y * y + a * a);
            }
            // tail beyond |m| > m_max: ~ 2 / (l^2 m_max)
            s += 2.0 / (l * l * m_max as f64);
            let closed = periodic_poisson_1d(x, a, l);
            assert!((s - closed).abs() < 1e-9 * closed, "x = {x}: {s} vs {closed}");
        }
    }

    #[test]
    fn poisson_coefficients_are_exponential() {
        let (a, l) = (0.5, 100.0);
        let g = make_grid(1, l, 4096).unwrap();
        let s = poisson_kernel(g.clone(), a).forward();
        let dxi = g.frequency_spacing(0);
        for k in [0i64, 1, 10, 100, 300] {
            let xi = k as f64 * dxi;
            let exact = PI / a * (-a * xi).exp();
            let got = s.at(&[k]);
            assert!((got.re - exact).abs() < 1e-12 * (PI / a), "k = {k}");
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn sech_transform_closed_form() {
        let (a, l) = (0.5, 60.0);
        let g = make_grid(1, l, 1024).unwrap();
        let s = sech(g.clone(), 1.0, a).forward();
        let dxi = g.frequency_spacing(0);
        for k in [0i64, 5, 40, 150] {
            let xi = k as f64 * dxi;
            let exact = 2.0 * a / (a * xi).cosh();
            assert!((s.at(&[k]).re - exact).abs() < 1e-12, "k = {k}");
        }
    }
}
