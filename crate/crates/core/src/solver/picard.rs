//! Fixed-point iteration of the Duhamel map
//!
//! `Phi(u)(t) = W'(t) u0 + W(t) u1 - int_0^t W(t - s) |u|^{p-1} u(s) ds`
//!
//! on a uniform time mesh, with the integral discretized by the composite
//! trapezoid rule. Contraction is observed, not assumed.

use crate::error::{Error, Result};
use crate::spectral::{
    gevrey_norm_spectral, pointwise_power, Complex64, GevreyIndex, PhysicalField, SpectralField,
};

use super::linear::Propagator;
use super::state::{SolverConfig, Trajectory, WaveState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contraction {
    /// Every successive-difference ratio stayed below one.
    Contracting,
    /// Some successive difference failed to shrink.
    NonContracting,
}

#[derive(Clone, Debug)]
pub struct PicardOutcome {
    /// The last iterate on the time mesh.
    pub trajectory: Trajectory,
    /// `sup_t ||u_k - u_{k-1}||_{G^{sigma,s}} + ||v_k - v_{k-1}||_{G^{sigma,s-1}}`, `k = 1..`.
    pub differences: Vec<f64>,
    /// Largest ratio of consecutive differences above round-off.
    pub contraction_factor: Option<f64>,
    pub status: Contraction,
}

/// Differences below this fraction of the solution size are round-off.
const ROUNDOFF_FLOOR: f64 = 1e-13;

pub fn picard_iterate(
    u0: &PhysicalField,
    u1: &PhysicalField,
    delta: f64,
    iterations: usize,
    cfg: &SolverConfig,
    nt: usize,
    norm_index: GevreyIndex,
) -> Result<PicardOutcome> {
    cfg.validate()?;
    crate::spectral::check_same_grid(u0.grid(), u1.grid())?;
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    if nt == 0 {
        return Err(Error::invalid("need at least one time interval"));
    }
    let grid = u0.grid().clone();
    let h = delta / nt as f64;
    let lags: Vec<Propagator> = (0..=nt).map(|l| Propagator::new(&grid, l as f64 * h)).collect();

    let u0h = u0.forward();
    let u1h = u1.forward();
    let free: Vec<(SpectralField, SpectralField)> = lags
        .iter()
        .map(|prop| {
            let mut u = u0h.clone();
            let mut v = u1h.clone();
            prop.apply(u.coefficients_mut(), v.coefficients_mut());
            (u, v)
        })
        .collect();

    let mut current = free.clone();
    let mut differences = Vec::with_capacity(iterations);
    let mut u_phys: Vec<PhysicalField> = current.iter().map(|(u, _)| u.inverse()).collect();
    let size = solution_size(&current, norm_index)?;

    for _ in 0..iterations {
        let forcing: Vec<SpectralField> = u_phys
            .iter()
            .map(|u| pointwise_power(u, cfg.p).map(|f| f.forward()))
            .collect::<Result<_>>()?;

        let mut next = Vec::with_capacity(nt + 1);
        for j in 0..=nt {
            let (mut u, mut v) = free[j].clone();
            for m in 0..=j {
                let w = if j == 0 {
                    0.0
                } else if m == 0 || m == j {
                    0.5 * h
                } else {
                    h
                };
                if w == 0.0 {
                    continue;
                }
                let prop = &lags[j - m];
                let scale = cfg.mu * w;
                let src = forcing[m].coefficients();
                let uc = u.coefficients_mut();
                for i in 0..src.len() {
                    uc[i] += src[i] * (scale * prop.sinc[i]);
                }
                let vc = v.coefficients_mut();
                for i in 0..src.len() {
                    vc[i] += src[i] * (scale * prop.cos[i]);
                }
            }
            next.push((u, v));
        }

        differences.push(distance(&next, &current, norm_index)?);
        current = next;
        u_phys = current.iter().map(|(u, _)| u.inverse()).collect();
        if u_phys.iter().any(|u| !u.is_finite()) {
            return Err(Error::BlowUp {
                time: delta,
                last: Box::new(WaveState {
                    u: u0.clone(),
                    v: u1.clone(),
                    time: 0.0,
                }),
            });
        }
    }

    let floor = ROUNDOFF_FLOOR * size.max(f64::MIN_POSITIVE);
    let ratios: Vec<f64> = differences
        .windows(2)
        .filter(|w| w[0] > floor && w[1] > floor)
        .map(|w| w[1] / w[0])
        .collect();
    let contraction_factor = ratios.iter().copied().reduce(f64::max);
    let status = if ratios.iter().all(|&r| r < 1.0) {
        Contraction::Contracting
    } else {
        Contraction::NonContracting
    };

    let states = current
        .iter()
        .zip(u_phys)
        .enumerate()
        .map(|(j, ((_, v), u))| WaveState {
            u,
            v: v.inverse(),
            time: j as f64 * h,
        })
        .collect();
    Ok(PicardOutcome {
        trajectory: Trajectory {
            states,
            config: *cfg,
        },
        differences,
        contraction_factor,
        status,
    })
}

type Mesh = [(SpectralField, SpectralField)];

fn pair_norm(u: &SpectralField, v: &SpectralField, idx: GevreyIndex) -> Result<f64> {
    let lower = GevreyIndex {
        sigma: idx.sigma,
        s: idx.s - 1.0,
    };
    Ok(gevrey_norm_spectral(u, idx)? + gevrey_norm_spectral(v, lower)?)
}

fn solution_size(mesh: &Mesh, idx: GevreyIndex) -> Result<f64> {
    mesh.iter()
        .map(|(u, v)| pair_norm(u, v, idx))
        .try_fold(0.0f64, |acc, n| n.map(|n| acc.max(n)))
}

fn distance(a: &Mesh, b: &Mesh, idx: GevreyIndex) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for ((ua, va), (ub, vb)) in a.iter().zip(b) {
        let du = diff(ua, ub);
        let dv = diff(va, vb);
        sup = sup.max(pair_norm(&du, &dv, idx)?);
    }
    Ok(sup)
}

fn diff(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let c: Vec<Complex64> = a
        .coefficients()
        .iter()
        .zip(b.coefficients())
        .map(|(x, y)| x - y)
        .collect();
    SpectralField::from_parts_unchecked(a.grid().clone(), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::linear_propagate;
    use crate::spectral::make_grid;

    fn h1() -> GevreyIndex {
        GevreyIndex::sobolev(1.0)
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = make_grid(1, 20.0, 64).unwrap();
        let z = PhysicalField::zeros(g);
        let cfg = SolverConfig::new(3, 0.01).unwrap();
        let out = picard_iterate(&z, &z, 0.1, 4, &cfg, 8, h1()).unwrap();
        assert!(out.differences.iter().all(|&d| d == 0.0));
        assert!(out.trajectory.states.iter().all(|s| s.u.max_abs() == 0.0));
    }

    #[test]
    fn no_iterations_is_free_solution() {
        let g = make_grid(1, 20.0, 64).unwrap();
        let u0 = crate::profiles::gaussian(g.clone(), 1.0, 1.0);
        let u1 = crate::profiles::sech(g, 0.5, 1.0);
        let cfg = SolverConfig::new(3, 0.01).unwrap();
        let out = picard_iterate(&u0, &u1, 0.4, 0, &cfg, 4, h1()).unwrap();
        assert!(out.differences.is_empty());
        let s0 = WaveState::new(u0, u1, 0.0).unwrap();
        for s in &out.trajectory.states {
            let free = linear_propagate(&s0, s.time);
            assert!(s.sup_distance(&free).unwrap() < 1e-13);
        }
    }
}
