use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::fft::{self, Direction};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Complex samples on a [`Grid`], row-major, last axis fastest.
#[derive(Clone, Debug)]
pub struct PhysicalField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

/// Discrete Fourier coefficients approximating `f^(xi) = int e^{-i x.xi} f(x) dx`
/// over one period cell, stored in FFT order.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coefficients: Vec<Complex64>,
}

impl PhysicalField {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("field values must be finite"));
        }
        Ok(PhysicalField { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        PhysicalField { grid, values }
    }

    pub fn constant(grid: Arc<Grid>, c: Complex64) -> Self {
        let values = vec![c; grid.len()];
        PhysicalField { grid, values }
    }

    /// Sample `f` at every grid coordinate.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = grid.coordinates().map(|x| f(&x)).collect();
        PhysicalField { grid, values }
    }

    pub fn from_real_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<Grid>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        PhysicalField { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        PhysicalField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &PhysicalField) -> Result<Self> {
        check_same(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a + b * c)
            .collect();
        Ok(PhysicalField {
            grid: self.grid.clone(),
            values,
        })
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn sup_distance(&self, other: &PhysicalField) -> Result<f64> {
        check_same(&self.grid, &other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn forward(&self) -> SpectralField {
        forward_transform(self)
    }
}

impl SpectralField {
    pub fn new(grid: Arc<Grid>, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                coefficients.len()
            )));
        }
        if coefficients
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(SpectralField { grid, coefficients })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let coefficients = vec![Complex64::new(0.0, 0.0); grid.len()];
        SpectralField { grid, coefficients }
    }

    /// Coefficients given as a function of the integer wavenumber vector.
    pub fn from_wavenumber_fn(grid: Arc<Grid>, f: impl Fn(&[i64]) -> Complex64) -> Self {
        let per_axis: Vec<Vec<i64>> = (0..grid.dim()).map(|a| grid.wavenumbers(a)).collect();
        let coefficients = (0..grid.len())
            .map(|flat| {
                let k: Vec<i64> = grid
                    .unravel(flat)
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| per_axis[a][i])
                    .collect();
                f(&k)
            })
            .collect();
        SpectralField { grid, coefficients }
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<Grid>, coefficients: Vec<Complex64>) -> Self {
        debug_assert_eq!(coefficients.len(), grid.len());
        SpectralField { grid, coefficients }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    /// Coefficient at an integer wavenumber vector, zero off-lattice.
    pub fn at(&self, k: &[i64]) -> Complex64 {
        self.grid
            .spectral_index(k)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coefficients[i])
    }

    pub fn inverse(&self) -> PhysicalField {
        inverse_transform(self)
    }
}

/// Trapezoidal discretization `(L/N)^d sum_j f(x_j) e^{-i x_j . xi_k}`.
pub fn forward_transform(f: &PhysicalField) -> SpectralField {
    let grid = f.grid.clone();
    let mut buf = f.values.clone();
    fft::transform(&mut buf, grid.points(), Direction::Forward);
    let w = grid.cell_volume();
    for (z, &odd) in buf.iter_mut().zip(grid.odd_parity()) {
        *z *= if odd { -w } else { w };
    }
    SpectralField::from_parts_unchecked(grid, buf)
}

/// Exact discrete inverse of [`forward_transform`]: `L^{-d} sum_k F_k e^{i x_j . xi_k}`.
pub fn inverse_transform(spec: &SpectralField) -> PhysicalField {
    let grid = spec.grid.clone();
    let mut buf = spec.coefficients.clone();
    let w = 1.0 / grid.volume();
    for (z, &odd) in buf.iter_mut().zip(grid.odd_parity()) {
        *z *= if odd { -w } else { w };
    }
    fft::transform(&mut buf, grid.points(), Direction::Inverse);
    PhysicalField::from_parts_unchecked(grid, buf)
}

pub(crate) fn check_same(a: &Arc<Grid>, b: &Arc<Grid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

impl Add for &PhysicalField {
    type Output = PhysicalField;

    fn add(self, rhs: &PhysicalField) -> PhysicalField {
        self.axpy(1.0, rhs).expect("grid mismatch in field addition")
    }
}

impl Sub for &PhysicalField {
    type Output = PhysicalField;

    fn sub(self, rhs: &PhysicalField) -> PhysicalField {
        self.axpy(-1.0, rhs).expect("grid mismatch in field subtraction")
    }
}

impl Mul<f64> for &PhysicalField {
    type Output = PhysicalField;

    fn mul(self, rhs: f64) -> PhysicalField {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::make_grid;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let g = make_grid(1, 2.0 * PI, 16).unwrap();
        let f = PhysicalField::zeros(g.clone());
        assert!(f.forward().coefficients().iter().all(|z| z.norm() == 0.0));
        let s = SpectralField::zeros(g);
        assert!(s.inverse().values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn single_mode_has_coefficient_l() {
        let l = 2.0 * PI;
        let g = make_grid(1, l, 64).unwrap();
        let f = PhysicalField::from_fn(g, |x| Complex64::from_polar(1.0, 3.0 * x[0]));
        let s = f.forward();
        for (i, k) in s.grid().wavenumbers(0).into_iter().enumerate() {
            let expect = if k == 3 { c(l) } else { c(0.0) };
            assert!((s.coefficients()[i] - expect).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn inverse_of_single_coefficient_is_mode() {
        let l = 2.0 * PI;
        let g = make_grid(1, l, 32).unwrap();
        let s = SpectralField::from_wavenumber_fn(g, |k| if k[0] == 3 { c(l) } else { c(0.0) });
        let f = s.inverse();
        for (x, z) in f.grid().coordinates().zip(f.values()) {
            assert!((z - Complex64::from_polar(1.0, 3.0 * x[0])).norm() < 1e-13);
        }
    }

    #[test]
    fn mismatched_value_count_rejected() {
        let g = make_grid(1, 1.0, 8).unwrap();
        assert!(PhysicalField::new(g.clone(), vec![c(0.0); 7]).is_err());
        assert!(PhysicalField::new(g, vec![c(f64::NAN); 8]).is_err());
    }

    #[test]
    fn two_dimensional_roundtrip() {
        let g = Grid::with_axes(&[3.0, 5.0], &[8, 12]).unwrap();
        let f = PhysicalField::from_fn(g, |x| {
            Complex64::new((x[0] * 1.3).sin() + x[1], (x[0] * x[1]).cos())
        });
        let back = f.forward().inverse();
        assert!(back.sup_distance(&f).unwrap() < 1e-13);
    }
}
