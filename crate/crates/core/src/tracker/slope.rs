//! Radius of analyticity read off the exponential decay rate of the spectrum.

use crate::error::{Error, Result};
use crate::spectral::{PhysicalField, SpectralField};

use super::decay::least_squares;

/// Shells below this fraction of the spectral maximum are round-off.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;
/// Fewest shells accepted in a fit.
pub const MIN_SHELLS: usize = 8;
/// Relative spread between half-band fits that flags superexponential decay.
pub const SUPEREXPONENTIAL_SPREAD: f64 = 0.20;
/// Relative disagreement between estimators that flags a run.
pub const ESTIMATOR_DISAGREEMENT: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    /// Fitted decay rate, clipped at zero.
    pub sigma: f64,
    pub intercept: f64,
    pub shells: usize,
}

/// Shell maxima `(|xi| at the maximum, max |f^|)` over `[lo, hi]`.
fn shell_maxima(spec: &SpectralField, band: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = band;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
        return Err(Error::invalid(format!("bad fit band [{lo}, {hi}]")));
    }
    let grid = spec.grid();
    if hi > grid.nyquist_frequency() {
        return Err(Error::invalid(format!(
            "fit band top {hi} beyond Nyquist frequency {}",
            grid.nyquist_frequency()
        )));
    }
    let width = (0..grid.dim()).map(|a| grid.frequency_spacing(a)).fold(0.0, f64::max);
    let count = ((hi - lo) / width).floor() as usize;
    let mut shells: Vec<Option<(f64, f64)>> = vec![None; count];
    let mut global: f64 = 0.0;
    for ((z, &xi), &nyq) in spec
        .coefficients()
        .iter()
        .zip(grid.abs_xi())
        .zip(grid.nyquist_mask())
    {
        if nyq {
            continue;
        }
        let m = z.norm();
        global = global.max(m);
        if xi < lo {
            continue;
        }
        let j = ((xi - lo) / width).floor() as usize;
        if j < count {
            let slot = &mut shells[j];
            if slot.is_none_or(|(_, best)| m > best) {
                *slot = Some((xi, m));
            }
        }
    }
    let shells: Vec<(f64, f64)> = shells.into_iter().flatten().collect();
    if shells.len() < MIN_SHELLS {
        return Err(Error::invalid(format!(
            "fit band [{lo}, {hi}] holds {} shells, need {MIN_SHELLS}",
            shells.len()
        )));
    }
    if let Some(&(xi, _)) = shells.iter().find(|(_, m)| *m <= ROUNDOFF_FLOOR * global) {
        return Err(Error::invalid(format!(
            "spectrum reaches the round-off floor at |xi| = {xi:.4} inside the fit band"
        )));
    }
    Ok(shells)
}

fn fit_shells(shells: &[(f64, f64)]) -> Result<SlopeFit> {
    let xs: Vec<f64> = shells.iter().map(|s| s.0).collect();
    let ys: Vec<f64> = shells.iter().map(|s| s.1.ln()).collect();
    let line = least_squares(&xs, &ys).ok_or_else(|| Error::invalid("degenerate fit band"))?;
    Ok(SlopeFit {
        sigma: (-line.slope).max(0.0),
        intercept: line.intercept,
        shells: shells.len(),
    })
}

pub fn slope_fit(f: &PhysicalField, band: (f64, f64)) -> Result<SlopeFit> {
    fit_shells(&shell_maxima(&f.forward(), band)?)
}

/// Fit `log max_shell |f^| = -sigma |xi| + c` over the band; returns `max(sigma, 0)`.
pub fn radius_by_slope(f: &PhysicalField, band: (f64, f64)) -> Result<f64> {
    Ok(slope_fit(f, band)?.sigma)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeDiagnostic {
    pub full: SlopeFit,
    pub lower: SlopeFit,
    pub upper: SlopeFit,
    /// The two half-band rates differ by more than [`SUPEREXPONENTIAL_SPREAD`].
    pub superexponential: bool,
}

/// Fit the whole band and each half; a genuine strip gives one rate, an
/// entire function gives a rate growing with frequency.
pub fn slope_diagnostic(f: &PhysicalField, band: (f64, f64)) -> Result<SlopeDiagnostic> {
    let spec = f.forward();
    let shells = shell_maxima(&spec, band)?;
    let mid = shells.len() / 2;
    if mid < MIN_SHELLS {
        return Err(Error::invalid(format!(
            "fit band needs {} shells for the half-band test, has {}",
            2 * MIN_SHELLS,
            shells.len()
        )));
    }
    let full = fit_shells(&shells)?;
    let lower = fit_shells(&shells[..mid])?;
    let upper = fit_shells(&shells[mid..])?;
    Ok(SlopeDiagnostic {
        full,
        lower,
        upper,
        superexponential: relative_spread(lower.sigma, upper.sigma) > SUPEREXPONENTIAL_SPREAD,
    })
}

fn relative_spread(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if a == b {
        0.0
    } else if m == 0.0 {
        f64::INFINITY
    } else {
        (a - b).abs() / m
    }
}

/// Energy and slope radii disagree by more than [`ESTIMATOR_DISAGREEMENT`].
pub fn estimators_disagree(sigma_energy: f64, sigma_slope: f64) -> bool {
    let m = sigma_energy.abs().max(sigma_slope.abs());
    m > 0.0 && (sigma_energy - sigma_slope).abs() / m > ESTIMATOR_DISAGREEMENT
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{exponential_spectrum, gaussian};
    use crate::spectral::make_grid;

    #[test]
    fn exact_exponential() {
        let g = make_grid(1, 100.0, 1024).unwrap();
        let f = exponential_spectrum(g, 1.0, 0.7);
        let s = radius_by_slope(&f, (2.0, 25.0)).unwrap();
        assert!((s - 0.7).abs() < 1e-6, "{s}");
    }

    #[test]
    fn exact_exponential_two_dimensions() {
        let g = make_grid(2, 40.0, 128).unwrap();
        let f = exponential_spectrum(g, 1.0, 1.3);
        let s = radius_by_slope(&f, (1.0, 9.0)).unwrap();
        assert!((s - 1.3).abs() < 1e-6, "{s}");
    }

    #[test]
    fn gaussian_flagged() {
        let g = make_grid(1, 50.0, 1024).unwrap();
        let f = gaussian(g, 1.0, 1.0);
        let d = slope_diagnostic(&f, (1.0, 7.0)).unwrap();
        assert!(d.superexponential, "{d:?}");
        assert!(d.upper.sigma > d.lower.sigma);
    }

    #[test]
    fn band_validation() {
        let g = make_grid(1, 100.0, 1024).unwrap();
        let f = exponential_spectrum(g, 1.0, 0.7);
        assert!(radius_by_slope(&f, (2.0, 2.3)).is_err());
        assert!(radius_by_slope(&f, (2.0, 60.0)).is_err());
        let g = make_grid(1, 100.0, 4096).unwrap();
        let f = exponential_spectrum(g, 1.0, 2.0);
        assert!(radius_by_slope(&f, (2.0, 40.0)).is_err());
    }

    #[test]
    fn disagreement_flag() {
        assert!(!estimators_disagree(0.5, 0.45));
        assert!(estimators_disagree(0.5, 0.3));
        assert!(!estimators_disagree(0.0, 0.0));
    }
}
