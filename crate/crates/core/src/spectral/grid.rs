use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Smallest admissible number of samples per axis.
pub const MIN_POINTS: usize = 8;

/// Periodic sampling lattice on the centered torus `[-L/2, L/2)^d`.
///
/// Frequencies follow FFT ordering along each axis: index `i` carries the
/// integer wavenumber `k = i` for `i < N/2` and `k = i - N` otherwise, with
/// `xi = 2 pi k / L`. The index `N/2` is the unpaired Nyquist mode `k = -N/2`.
#[derive(Debug)]
pub struct Grid {
    extent: Vec<f64>,
    points: Vec<usize>,
    abs_xi: Vec<f64>,
    nyquist: Vec<bool>,
    parity: Vec<bool>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.extent == other.extent && self.points == other.points
    }
}

impl Grid {
    /// Uniform grid: the same extent and sample count on every axis.
    pub fn new(dim: usize, extent: f64, points: usize) -> Result<Arc<Grid>> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        Grid::with_axes(&vec![extent; dim], &vec![points; dim])
    }

    pub fn with_axes(extent: &[f64], points: &[usize]) -> Result<Arc<Grid>> {
        let dim = extent.len();
        if !(1..=3).contains(&dim) || points.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "need 1..=3 axes with one extent and one point count each, got {} and {}",
                extent.len(),
                points.len()
            )));
        }
        for (&l, &n) in extent.iter().zip(points) {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("extent {l} must be positive")));
            }
            if n % 2 != 0 || n < MIN_POINTS {
                return Err(Error::InvalidGrid(format!(
                    "points per axis must be even and >= {MIN_POINTS}, got {n}"
                )));
            }
        }

        let len: usize = points.iter().product();
        let mut abs_xi = Vec::with_capacity(len);
        let mut nyquist = Vec::with_capacity(len);
        let mut parity = Vec::with_capacity(len);
        let mut idx = vec![0usize; dim];
        for _ in 0..len {
            let mut sq = 0.0;
            let mut nyq = false;
            let mut ksum = 0i64;
            for a in 0..dim {
                let k = wavenumber(idx[a], points[a]);
                nyq |= 2 * idx[a] == points[a];
                ksum += k;
                let xi = 2.0 * PI * k as f64 / extent[a];
                sq += xi * xi;
            }
            abs_xi.push(sq.sqrt());
            nyquist.push(nyq);
            parity.push(ksum.rem_euclid(2) == 1);
            // row-major increment, last axis fastest
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < points[a] {
                    break;
                }
                idx[a] = 0;
            }
        }

        Ok(Arc::new(Grid {
            extent: extent.to_vec(),
            points: points.to_vec(),
            abs_xi,
            nyquist,
            parity,
        }))
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.abs_xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abs_xi.is_empty()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.extent[axis] / self.points[axis] as f64
    }

    /// Quadrature weight `prod_a L_a / N_a`.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    /// Torus volume `prod_a L_a`.
    pub fn volume(&self) -> f64 {
        self.extent.iter().product()
    }

    /// Frequency lattice spacing `2 pi / L` along one axis.
    pub fn frequency_spacing(&self, axis: usize) -> f64 {
        2.0 * PI / self.extent[axis]
    }

    /// Largest positive frequency representable on every axis, `min_a pi N_a / L_a`.
    pub fn nyquist_frequency(&self) -> f64 {
        (0..self.dim())
            .map(|a| PI * self.points[a] as f64 / self.extent[a])
            .fold(f64::INFINITY, f64::min)
    }

    /// `|xi|` at every flat spectral index.
    pub fn abs_xi(&self) -> &[f64] {
        &self.abs_xi
    }

    /// True where any axis sits on its unpaired `-N/2` mode.
    pub fn nyquist_mask(&self) -> &[bool] {
        &self.nyquist
    }

    pub fn max_abs_xi(&self) -> f64 {
        self.abs_xi.iter().copied().fold(0.0, f64::max)
    }

    /// Sign `(-1)^{k_1 + ... + k_d}` that moves the FFT origin to `-L/2`.
    pub(crate) fn odd_parity(&self) -> &[bool] {
        &self.parity
    }

    /// Physical coordinate of sample `j` along `axis`.
    pub fn coordinate(&self, axis: usize, j: usize) -> f64 {
        -0.5 * self.extent[axis] + j as f64 * self.spacing(axis)
    }

    /// Integer wavenumbers along one axis, in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> Vec<i64> {
        let n = self.points[axis];
        (0..n).map(|i| wavenumber(i, n)).collect()
    }

    /// Frequencies `xi_k = 2 pi k / L` along one axis, in FFT order.
    pub fn frequencies(&self, axis: usize) -> Vec<f64> {
        let dxi = self.frequency_spacing(axis);
        self.wavenumbers(axis)
            .into_iter()
            .map(|k| k as f64 * dxi)
            .collect()
    }

    /// Multi-index of a flat position (row-major, last axis fastest).
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.points[a];
            flat /= self.points[a];
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.points)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    /// Flat spectral index of an integer wavenumber vector, if it lies on the lattice.
    pub fn spectral_index(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim() {
            return None;
        }
        let mut flat = 0;
        for (a, &ka) in k.iter().enumerate() {
            let n = self.points[a] as i64;
            if ka < -n / 2 || ka >= n / 2 {
                return None;
            }
            flat = flat * n as usize + ka.rem_euclid(n) as usize;
        }
        Some(flat)
    }

    /// Physical coordinates of every sample, one `Vec` per point.
    pub fn coordinates(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |flat| {
            self.unravel(flat)
                .iter()
                .enumerate()
                .map(|(a, &j)| self.coordinate(a, j))
                .collect()
        })
    }
}

pub(crate) fn wavenumber(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Convenience wrapper matching the uniform-grid constructor.
pub fn make_grid(dim: usize, extent: f64, points: usize) -> Result<Arc<Grid>> {
    Grid::new(dim, extent, points)
}
