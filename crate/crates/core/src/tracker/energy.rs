use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solver::{energy_parts_spectral, SolverConfig, Trajectory, WaveState};
use crate::spectral::{PhysicalField, SpectralField};

use super::series::{Estimator, RadiusEntry, RadiusSeries};

/// Growth factor allowed by the concluded bootstrap statement.
pub const C_FACTOR: f64 = 2.0;
/// Growth factor allowed by the bootstrap hypothesis.
pub const H_FACTOR: f64 = 4.0;
/// Default bisection tolerance in `sigma`.
pub const DEFAULT_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyRecord {
    pub time: f64,
    pub sigma: f64,
    pub energy: f64,
}

/// `E_sigma = 1/2||nabla U||^2 + 1/2||V||^2 + 1/(p+1)||U||_{p+1}^{p+1}` with
/// `U = e^{sigma|D|} u`, `V = e^{sigma|D|} u_t`.
pub fn modified_energy(state: &WaveState, sigma: f64, cfg: &SolverConfig) -> Result<EnergyRecord> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    let parts = energy_parts_spectral(&state.u, &state.u.forward(), &state.v.forward(), sigma, cfg.p)?;
    Ok(EnergyRecord {
        time: state.time,
        sigma,
        energy: parts.total(),
    })
}

struct Snapshot {
    time: f64,
    u: PhysicalField,
    u_hat: SpectralField,
    v_hat: SpectralField,
}

/// Trajectory with cached spectra and memoized bootstrap probes.
pub struct EnergyProbe {
    snapshots: Vec<Snapshot>,
    p: u32,
    first_failure: Mutex<HashMap<u64, usize>>,
}

impl EnergyProbe {
    pub fn new(trajectory: &Trajectory) -> Result<Self> {
        if trajectory.is_empty() {
            return Err(Error::invalid("empty trajectory"));
        }
        let snapshots = trajectory
            .states
            .par_iter()
            .map(|s| Snapshot {
                time: s.time,
                u: s.u.clone(),
                u_hat: s.u.forward(),
                v_hat: s.v.forward(),
            })
            .collect();
        Ok(EnergyProbe {
            snapshots,
            p: trajectory.config.p,
            first_failure: Mutex::new(HashMap::new()),
        })
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    /// `E_sigma` at every recorded time.
    pub fn energies(&self, sigma: f64) -> Result<Vec<f64>> {
        self.snapshots.par_iter().map(|s| self.energy_at(s, sigma)).collect()
    }

    fn energy_at(&self, s: &Snapshot, sigma: f64) -> Result<f64> {
        Ok(energy_parts_spectral(&s.u, &s.u_hat, &s.v_hat, sigma, self.p)?.total())
    }

    /// Index of the first record where `E_sigma > 2 E_sigma(0)`, or `len()`.
    /// Overflow counts as failure at the first record after `t = 0`.
    pub fn first_failure(&self, sigma: f64) -> Result<usize> {
        let key = sigma.to_bits();
        if let Some(&i) = self.first_failure.lock().expect("probe cache").get(&key) {
            return Ok(i);
        }
        let found = self.scan(sigma)?;
        self.first_failure.lock().expect("probe cache").insert(key, found);
        Ok(found)
    }

    fn scan(&self, sigma: f64) -> Result<usize> {
        let fail_early = 1.min(self.len());
        let e0 = match self.energy_at(&self.snapshots[0], sigma) {
            Ok(e) => e,
            Err(Error::Overflow { .. }) => return Ok(fail_early),
            Err(e) => return Err(e),
        };
        let limit = C_FACTOR * e0;
        let chunk = rayon::current_num_threads().max(1) * 2;
        let mut start = 1;
        while start < self.len() {
            let end = (start + chunk).min(self.len());
            let energies: Vec<Result<f64>> = self.snapshots[start..end]
                .par_iter()
                .map(|s| self.energy_at(s, sigma))
                .collect();
            for (offset, e) in energies.into_iter().enumerate() {
                match e {
                    Ok(e) if e.is_finite() && e <= limit => {}
                    Ok(_) | Err(Error::Overflow { .. }) => return Ok(start + offset),
                    Err(e) => return Err(e),
                }
            }
            start = end;
        }
        Ok(self.len())
    }

    /// Bootstrap condition on records `0..=index`.
    pub fn holds(&self, sigma: f64, index: usize) -> Result<bool> {
        Ok(self.first_failure(sigma)? > index)
    }

    /// Bisection on `[0, sigma_max]` for the record `index`.
    pub fn radius_at(&self, index: usize, sigma_max: f64, tol: f64) -> Result<RadiusEntry> {
        check_search(sigma_max, tol)?;
        let snap = self
            .snapshots
            .get(index)
            .ok_or_else(|| Error::invalid(format!("record {index} out of range")))?;
        let entry = |sigma_star, saturated| RadiusEntry {
            time: snap.time,
            sigma_star,
            estimator: Estimator::Energy,
            saturated,
        };
        if self.holds(sigma_max, index)? {
            return Ok(entry(sigma_max, true));
        }
        if !self.holds(0.0, index)? {
            return Ok(entry(0.0, false));
        }
        let (mut lo, mut hi) = (0.0, sigma_max);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.holds(mid, index)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(entry(lo, false))
    }

    /// Coarse scan: largest grid value `sigma_max * j / points` such that the
    /// condition holds at every grid value up to it.
    pub fn radius_by_scan(&self, index: usize, sigma_max: f64, points: usize) -> Result<f64> {
        if points == 0 {
            return Err(Error::invalid("scan needs at least one point"));
        }
        let mut best = 0.0;
        for j in 0..=points {
            let sigma = sigma_max * j as f64 / points as f64;
            if !self.holds(sigma, index)? {
                break;
            }
            best = sigma;
        }
        Ok(best)
    }

    /// Radius estimate at every record.
    pub fn radius_series(&self, sigma_max: f64, tol: f64) -> Result<RadiusSeries> {
        let entries = (0..self.len())
            .into_par_iter()
            .map(|i| self.radius_at(i, sigma_max, tol))
            .collect::<Result<Vec<_>>>()?;
        RadiusSeries::from_entries(entries)
    }
}

fn check_search(sigma_max: f64, tol: f64) -> Result<()> {
    if !(sigma_max.is_finite() && sigma_max > 0.0) {
        return Err(Error::invalid(format!("sigma_max must be positive, got {sigma_max}")));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid(format!("tol must be positive, got {tol}")));
    }
    Ok(())
}

/// Largest `sigma in [0, sigma_max]` with `E_sigma(tau) <= 2 E_sigma(0)` for
/// every recorded `tau <= t`, to within `tol`.
pub fn radius_by_energy(trajectory: &Trajectory, t: f64, sigma_max: f64, tol: f64) -> Result<RadiusEntry> {
    check_search(sigma_max, tol)?;
    let index = trajectory
        .index_at(t)
        .ok_or_else(|| Error::invalid(format!("t = {t} precedes the trajectory")))?;
    let last = trajectory.states.last().map(|s| s.time).unwrap_or(f64::NAN);
    if t > last + 1e-9 * (1.0 + last.abs()) {
        return Err(Error::invalid(format!("t = {t} beyond the trajectory end {last}")));
    }
    EnergyProbe::new(trajectory)?.radius_at(index, sigma_max, tol)
}

/// [`radius_by_energy`] at every recorded time.
pub fn radius_series_by_energy(trajectory: &Trajectory, sigma_max: f64, tol: f64) -> Result<RadiusSeries> {
    EnergyProbe::new(trajectory)?.radius_series(sigma_max, tol)
}

/// Bootstrap statements at one record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BootstrapEntry {
    pub time: f64,
    /// `E_sigma(t) / E_sigma(0)`, zero when `E_sigma(0) = 0`.
    pub ratio: f64,
    /// `E_sigma <= 4 E_sigma(0)` on `[0, t]`.
    pub h: bool,
    /// `E_sigma <= 2 E_sigma(0)` on `[0, t]`.
    pub c: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    pub time: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapReport {
    pub sigma: f64,
    pub entries: Vec<BootstrapEntry>,
    pub first_h_failure: Option<f64>,
    pub first_c_failure: Option<f64>,
    /// Records where `H` holds on `[0, t]` but `C` fails at `t`.
    pub violations: Vec<Violation>,
}

impl BootstrapReport {
    pub fn c_holds_throughout(&self) -> bool {
        self.first_c_failure.is_none()
    }
}

pub fn bootstrap_monitor(trajectory: &Trajectory, sigma: f64) -> Result<BootstrapReport> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    let probe = EnergyProbe::new(trajectory)?;
    let energies = probe.energies(sigma)?;
    let e0 = energies[0];
    let mut entries = Vec::with_capacity(energies.len());
    let (mut h_all, mut c_all) = (true, true);
    let (mut first_h, mut first_c) = (None, None);
    let mut violations = Vec::new();
    for (time, e) in probe.times().into_iter().zip(energies) {
        let ratio = if e0 > 0.0 { e / e0 } else if e == 0.0 { 0.0 } else { f64::INFINITY };
        let c_here = ratio <= C_FACTOR;
        h_all &= ratio <= H_FACTOR;
        if h_all && !c_here {
            violations.push(Violation { time, ratio });
        }
        c_all &= c_here;
        if !h_all && first_h.is_none() {
            first_h = Some(time);
        }
        if !c_all && first_c.is_none() {
            first_c = Some(time);
        }
        entries.push(BootstrapEntry {
            time,
            ratio,
            h: h_all,
            c: c_all,
        });
    }
    Ok(BootstrapReport {
        sigma,
        entries,
        first_h_failure: first_h,
        first_c_failure: first_c,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{plane_wave, sech};
    use crate::solver::{energy_e0, evolve};
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn zero_sigma_matches_e0() {
        let g = make_grid(1, 30.0, 128).unwrap();
        let cfg = SolverConfig::new(3, 0.01).unwrap();
        let s = WaveState::new(sech(g.clone(), 0.7, 0.5), sech(g, 0.2, 1.0), 0.0).unwrap();
        assert_eq!(modified_energy(&s, 0.0, &cfg).unwrap().energy, energy_e0(&s, &cfg));
    }

    #[test]
    fn single_mode_modified_energy() {
        let g = make_grid(1, 2.0 * PI, 32).unwrap();
        let cfg = SolverConfig::new(3, 0.1).unwrap();
        let s = WaveState::at_rest(plane_wave(g, 0.1, &[1]).unwrap());
        let a = 0.1 * 0.5f64.exp();
        let expect = 0.5 * 2.0 * PI * a * a + 0.25 * 2.0 * PI * a.powi(4);
        let e = modified_energy(&s, 0.5, &cfg).unwrap().energy;
        assert!((e - expect).abs() < 1e-13 * expect);
        assert!((0.5 * 2.0 * PI * a * a - 0.085).abs() < 5e-4);
    }

    #[test]
    fn zero_solution_saturates() {
        let g = make_grid(1, 30.0, 64).unwrap();
        let cfg = SolverConfig::new(3, 0.1).unwrap();
        let tr = evolve(&WaveState::zeros(g), 1.0, &cfg, 2).unwrap();
        let series = radius_series_by_energy(&tr, 0.8, 1e-3).unwrap();
        assert!(series.entries().iter().all(|e| e.saturated && e.sigma_star == 0.8));
        let rep = bootstrap_monitor(&tr, 0.3).unwrap();
        assert!(rep.c_holds_throughout() && rep.violations.is_empty());
    }

    #[test]
    fn initial_time_is_vacuous() {
        let g = make_grid(1, 40.0, 256).unwrap();
        let cfg = SolverConfig::new(3, 0.01).unwrap();
        let tr = evolve(&WaveState::at_rest(sech(g, 1.0, 0.5)), 0.5, &cfg, 10).unwrap();
        let r = radius_by_energy(&tr, 0.0, 1.5, 1e-4).unwrap();
        assert_eq!(r.sigma_star, 1.5);
        assert!(r.saturated);
    }
}
