use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{Complex64, Grid, PhysicalField, SpectralField};

/// Random fields with a hard spectral envelope
/// `|f^(xi)| <= amplitude * e^{-decay_sigma |xi|}` and cutoff `|xi| <= band_limit`.
///
/// Coefficients are drawn in a fixed order over integer wavevectors, so a
/// seed produces the same continuum function on every grid that resolves
/// the band.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub grid: Arc<Grid>,
    pub decay_sigma: f64,
    pub band_limit: f64,
    pub amplitude: f64,
    pub seed: u64,
    /// Enforce Hermitian symmetry so samples are real.
    pub real_valued: bool,
}

impl EnsembleSpec {
    pub fn new(grid: Arc<Grid>, decay_sigma: f64, band_limit: f64, amplitude: f64, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec {
            grid,
            decay_sigma,
            band_limit,
            amplitude,
            seed,
            real_valued: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn real(mut self) -> Self {
        self.real_valued = true;
        self
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        EnsembleSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn with_grid(&self, grid: Arc<Grid>) -> Result<Self> {
        let spec = EnsembleSpec {
            grid,
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_band_limit(&self, band_limit: f64) -> Result<Self> {
        let spec = EnsembleSpec {
            band_limit,
            ..self.clone()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.decay_sigma.is_finite() && self.decay_sigma > 0.0) {
            return Err(Error::invalid("decay_sigma must be positive"));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::invalid("amplitude must be nonnegative"));
        }
        let nyq = self.grid.nyquist_frequency();
        if !(self.band_limit > 0.0 && self.band_limit <= nyq * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!(
                "band_limit {} must lie in (0, {nyq}]",
                self.band_limit
            )));
        }
        Ok(())
    }

    /// Integer wavevectors in sampling order, each tagged with whether it
    /// lies inside the band. Order is by ring `max_a |k_a|`, then
    /// lexicographic, so enlarging the band only appends draws.
    fn lattice(&self) -> Vec<(Vec<i64>, bool)> {
        let g = &self.grid;
        let dim = g.dim();
        let caps: Vec<i64> = (0..dim).map(|a| g.points()[a] as i64 / 2 - 1).collect();
        let m = (0..dim)
            .map(|a| ((self.band_limit / g.frequency_spacing(a)).floor() as i64).min(caps[a]))
            .max()
            .unwrap_or(0);
        let mut out = Vec::new();
        let mut k = vec![-m; dim];
        loop {
            let xi2: f64 = k
                .iter()
                .enumerate()
                .map(|(a, &ka)| (ka as f64 * g.frequency_spacing(a)).powi(2))
                .sum();
            let inside = xi2.sqrt() <= self.band_limit && k.iter().zip(&caps).all(|(ka, c)| ka.abs() <= *c);
            out.push((k.clone(), inside));
            let mut a = dim;
            loop {
                if a == 0 {
                    out.sort_by_key(|(k, _)| k.iter().map(|c| c.abs()).max().unwrap_or(0));
                    return out;
                }
                a -= 1;
                if k[a] < m {
                    k[a] += 1;
                    break;
                }
                k[a] = -m;
            }
        }
    }
}

/// Draw one field; deterministic in `spec.seed`.
pub fn sample_gevrey_field(spec: &EnsembleSpec) -> Result<PhysicalField> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    sample_with_rng(spec, &mut rng)
}

pub fn sample_with_rng<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<PhysicalField> {
    spec.validate()?;
    let g = &spec.grid;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); g.len()];
    let lattice = spec.lattice();
    let mut drawn = Vec::with_capacity(lattice.len());
    for _ in &lattice {
        let r: f64 = rng.gen();
        let phase: f64 = rng.gen::<f64>() * 2.0 * PI;
        drawn.push((r, phase));
    }
    for ((k, inside), &(r, phase)) in lattice.iter().zip(&drawn) {
        if !inside {
            continue;
        }
        let flat = g.spectral_index(k).expect("band lies inside the lattice");
        let envelope = spec.amplitude * (-spec.decay_sigma * g.abs_xi()[flat]).exp();
        coeffs[flat] = Complex64::from_polar(envelope * r, phase);
    }
    if spec.real_valued {
        for (k, _) in lattice.iter().filter(|(_, inside)| *inside) {
            // keep the lexicographically positive half, mirror it onto the rest
            let positive = k.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
            let flat = g.spectral_index(k).expect("in band");
            if k.iter().all(|&c| c == 0) {
                coeffs[flat] = Complex64::new(coeffs[flat].norm(), 0.0);
            } else if positive {
                let neg: Vec<i64> = k.iter().map(|c| -c).collect();
                let nflat = g.spectral_index(&neg).expect("band is symmetric");
                coeffs[nflat] = coeffs[flat].conj();
            }
        }
    }
    Ok(SpectralField::new(g.clone(), coeffs)?.inverse())
}
