use super::field::{PhysicalField, SpectralField};
use super::multiplier::{GevreyIndex, MultiplierSpec, OVERFLOW_GUARD};
use crate::error::{Error, Result};

/// `(sum_i x_i^2)^{1/2}` without intermediate overflow.
pub(crate) fn scaled_l2(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = values.clone().fold(0.0, f64::max);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let sum: f64 = values.map(|v| (v / m) * (v / m)).sum();
    m * sum.sqrt()
}

/// `( L^{-d} sum_k |m(xi_k)|^2 |F_k|^2 )^{1/2}` for the given symbol.
pub fn weighted_norm(spec: &SpectralField, m: &MultiplierSpec) -> Result<f64> {
    let grid = spec.grid();
    let weights = m.weights(grid)?;
    let terms = spec
        .coefficients()
        .iter()
        .zip(&weights)
        .map(|(z, &w)| if w == 0.0 { 0.0 } else { w * z.norm() });
    let norm = scaled_l2(terms) / grid.volume().sqrt();
    if !norm.is_finite() {
        return Err(Error::Overflow {
            exponent: m.sigma * grid.max_abs_xi(),
            limit: OVERFLOW_GUARD,
        });
    }
    Ok(norm)
}

/// Torus analogue of the `G^{sigma,s}` norm.
pub fn gevrey_norm(f: &PhysicalField, idx: GevreyIndex) -> Result<f64> {
    gevrey_norm_spectral(&f.forward(), idx)
}

pub fn gevrey_norm_spectral(spec: &SpectralField, idx: GevreyIndex) -> Result<f64> {
    weighted_norm(spec, &MultiplierSpec::from_index(idx))
}

/// `|| nabla f ||_{G^{sigma,s}}`: the Gevrey norm with an extra `|xi|` weight.
pub fn gradient_norm(f: &PhysicalField, idx: GevreyIndex) -> Result<f64> {
    gradient_norm_spectral(&f.forward(), idx)
}

pub fn gradient_norm_spectral(spec: &SpectralField, idx: GevreyIndex) -> Result<f64> {
    weighted_norm(
        spec,
        &MultiplierSpec {
            sigma: idx.sigma,
            s: idx.s,
            gradient_power: 1.0,
        },
    )
}

/// Quadrature `L^p` norm `((L/N)^d sum_j |f(x_j)|^p)^{1/p}`; `p = inf` gives the max norm.
pub fn lp_norm(f: &PhysicalField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::invalid(format!("L^p exponent must be >= 1, got {p}")));
    }
    let m = f.max_abs();
    if p.is_infinite() || m == 0.0 {
        return Ok(m);
    }
    let sum: f64 = f.values().iter().map(|z| (z.norm() / m).powf(p)).sum();
    Ok(m * (f.grid().cell_volume() * sum).powf(1.0 / p))
}

/// `||f||_{L^p}^p` without the final root, used by energies.
pub(crate) fn lp_power(f: &PhysicalField, p: f64) -> f64 {
    let h = f.grid().cell_volume();
    h * f.values().iter().map(|z| z.norm().powf(p)).sum::<f64>()
}
