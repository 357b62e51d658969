use crate::error::{Error, Result};

use super::series::RadiusSeries;

/// Guaranteed lower bound on the radius at time `t`:
/// `min{sigma0, C (1+t)^{-q}}` with `q = (p+1)/2` for `d = 1` and
/// `q = (p+1-eps)/(1-eps)` for `d = 2`.
pub fn theoretical_bound(t: f64, p: u32, d: usize, sigma0: f64, c: f64, eps: Option<f64>) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!("T must be >= 0, got {t}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::invalid(format!("C must be positive, got {c}")));
    }
    if !(sigma0.is_finite() && sigma0 >= 0.0) {
        return Err(Error::invalid(format!("sigma0 must be >= 0, got {sigma0}")));
    }
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::invalid(format!("p must be odd >= 3, got {p}")));
    }
    Ok(sigma0.min(c * (1.0 + t).powf(-decay_exponent(p, d, eps)?)))
}

/// Exponent of `(1+T)` in the guaranteed decay law.
pub fn decay_exponent(p: u32, d: usize, eps: Option<f64>) -> Result<f64> {
    let p = p as f64;
    match (d, eps) {
        (1, _) => Ok((p + 1.0) / 2.0),
        (2, Some(e)) if e > 0.0 && e < 1.0 => Ok((p + 1.0 - e) / (1.0 - e)),
        (2, e) => Err(Error::invalid(format!("d = 2 needs eps in (0, 1), got {e:?}"))),
        _ => Err(Error::invalid(format!("decay law stated for d = 1, 2, got {d}"))),
    }
}

/// Least-squares fit of `log sigma = -q log(1+t) + log c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub log_constant: f64,
    /// Root-mean-square residual in `log sigma`.
    pub residual: f64,
    /// Standard error of `exponent`; zero for an exact fit.
    pub exponent_stderr: f64,
    pub window: (f64, f64),
}

/// Fewest points accepted by [`fit_decay`].
pub const MIN_FIT_POINTS: usize = 8;

pub fn fit_decay(series: &RadiusSeries, window: (f64, f64)) -> Result<DecayFit> {
    let (t_min, t_max) = window;
    if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max && t_min >= 0.0) {
        return Err(Error::invalid(format!("bad fit window ({t_min}, {t_max})")));
    }
    let inside: Vec<_> = series
        .entries()
        .iter()
        .filter(|e| e.time >= t_min && e.time <= t_max)
        .collect();
    if inside.len() < MIN_FIT_POINTS {
        return Err(Error::invalid(format!(
            "fit window holds {} entries, need at least {MIN_FIT_POINTS}",
            inside.len()
        )));
    }
    if let Some(e) = inside.iter().find(|e| e.saturated) {
        return Err(Error::invalid(format!("saturated radius at t = {} inside fit window", e.time)));
    }
    if let Some(e) = inside.iter().find(|e| e.sigma_star <= 0.0) {
        return Err(Error::invalid(format!("zero radius at t = {} inside fit window", e.time)));
    }
    let xs: Vec<f64> = inside.iter().map(|e| e.time.ln_1p()).collect();
    let ys: Vec<f64> = inside.iter().map(|e| e.sigma_star.ln()).collect();
    let line = least_squares(&xs, &ys)
        .ok_or_else(|| Error::invalid("fit window needs at least two distinct times"))?;
    Ok(DecayFit {
        exponent: -line.slope,
        log_constant: line.intercept,
        residual: line.rms,
        exponent_stderr: line.slope_stderr,
        window,
    })
}

pub(crate) struct Line {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> Option<Line> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let slope_stderr = if xs.len() > 2 {
        (ss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(Line {
        slope,
        intercept,
        rms: (ss / n).sqrt(),
        slope_stderr,
    })
}

/// Radius for regularity `s` from the radius tracked at `s = 1`: the
/// embedding step costs half the strip.
pub fn radius_for_regularity(sigma_at_s1: f64, s: f64) -> f64 {
    if s == 1.0 {
        sigma_at_s1
    } else {
        0.5 * sigma_at_s1
    }
}
