use crate::error::{Error, Result};
use crate::spectral::{pointwise_power, PhysicalField};

use super::linear::linear_propagate;
use super::state::{SolverConfig, Trajectory, WaveState};

/// Relative amplitude below which data counts as absent for the horizon check.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

/// Exact flow of `u_t = 0, v_t = mu |u|^{p-1} u` over `dt`.
pub fn nonlinear_kick(state: &WaveState, dt: f64, cfg: &SolverConfig) -> Result<WaveState> {
    let force = pointwise_power(&state.u, cfg.p)?;
    Ok(WaveState {
        u: state.u.clone(),
        v: state.v.axpy(cfg.mu * dt, &force)?,
        time: state.time,
    })
}

/// One Strang step: half kick, exact linear flow, half kick.
pub fn step_strang(state: &WaveState, cfg: &SolverConfig) -> Result<WaveState> {
    step_with(state, cfg.dt, cfg)
}

pub(crate) fn step_with(state: &WaveState, dt: f64, cfg: &SolverConfig) -> Result<WaveState> {
    let half = nonlinear_kick(state, 0.5 * dt, cfg)?;
    let moved = linear_propagate(&half, dt);
    nonlinear_kick(&moved, 0.5 * dt, cfg)
}

/// Extent of the region where a field exceeds `threshold * scale`, per axis.
fn support_width(f: &PhysicalField, scale: f64, axis: usize) -> Option<(f64, f64)> {
    let grid = f.grid();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (flat, z) in f.values().iter().enumerate() {
        if z.norm() > SUPPORT_THRESHOLD * scale {
            let x = grid.coordinate(axis, grid.unravel(flat)[axis]);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Time before waves leaving the data's support meet across the torus:
/// `min_a (L_a - width_a) / 2` at unit speed.
pub fn wrap_horizon(state: &WaveState) -> f64 {
    let scale = state.u.max_abs().max(state.v.max_abs());
    if scale == 0.0 {
        return f64::INFINITY;
    }
    let grid = state.grid();
    (0..grid.dim())
        .map(|a| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for f in [&state.u, &state.v] {
                if let Some((l, h)) = support_width(f, scale, a) {
                    lo = lo.min(l);
                    hi = hi.max(h);
                }
            }
            0.5 * (grid.extent()[a] - (hi - lo))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Integrate to `t_final` with Strang steps, recording every `record_every`
/// steps and at the final time.
pub fn evolve(
    state: &WaveState,
    t_final: f64,
    cfg: &SolverConfig,
    record_every: usize,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::invalid(format!("final time must be >= 0, got {t_final}")));
    }
    if record_every == 0 {
        return Err(Error::invalid("record_every must be positive"));
    }
    if cfg.wrap_guard {
        let horizon = wrap_horizon(state);
        if t_final > horizon {
            return Err(Error::Horizon {
                time: t_final,
                horizon,
            });
        }
    }

    let t0 = state.time;
    let full = ((t_final / cfg.dt) * (1.0 + 1e-12)).floor() as usize;
    let remainder = t_final - full as f64 * cfg.dt;
    let partial = remainder > 1e-9 * cfg.dt;

    let mut states = vec![state.clone()];
    let mut current = state.clone();
    for k in 1..=full {
        let next = step_with(&current, cfg.dt, cfg)?;
        if !next.is_finite() {
            return Err(Error::BlowUp {
                time: t0 + k as f64 * cfg.dt,
                last: Box::new(current),
            });
        }
        current = next;
        current.time = t0 + k as f64 * cfg.dt;
        if k % record_every == 0 {
            states.push(current.clone());
        }
    }
    if partial {
        let next = step_with(&current, remainder, cfg)?;
        if !next.is_finite() {
            return Err(Error::BlowUp {
                time: t0 + t_final,
                last: Box::new(current),
            });
        }
        current = next;
    }
    current.time = t0 + t_final;
    let last_recorded = states.last().map(|s| s.time).unwrap_or(f64::NAN);
    if full > 0 || partial {
        if (last_recorded - current.time).abs() > 1e-12 * (1.0 + t_final) {
            states.push(current);
        } else if let Some(last) = states.last_mut() {
            last.time = t0 + t_final;
        }
    }
    Ok(Trajectory {
        states,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::gaussian;
    use crate::spectral::{make_grid, Complex64};

    fn cfg(dt: f64) -> SolverConfig {
        SolverConfig::new(3, dt).unwrap()
    }

    #[test]
    fn kick_of_zero_is_identity() {
        let g = make_grid(1, 10.0, 16).unwrap();
        let s = WaveState {
            u: PhysicalField::zeros(g.clone()),
            v: PhysicalField::from_real_fn(g, |x| x[0]),
            time: 0.3,
        };
        let k = nonlinear_kick(&s, 0.1, &cfg(0.1)).unwrap();
        assert_eq!(k.v.values(), s.v.values());
        assert_eq!(k.time, 0.3);
    }

    #[test]
    fn kick_constant_field() {
        let g = make_grid(1, 10.0, 16).unwrap();
        let s = WaveState::at_rest(PhysicalField::constant(g, Complex64::new(1.0, 0.0)));
        let k = nonlinear_kick(&s, 0.1, &cfg(0.1)).unwrap();
        for z in k.v.values() {
            assert!((z - Complex64::new(-0.1, 0.0)).norm() < 1e-14);
        }
        // position untouched, bit for bit
        assert_eq!(k.u.values(), s.u.values());
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = make_grid(1, 10.0, 32).unwrap();
        let s = WaveState::zeros(g);
        let out = step_strang(&s, &cfg(0.01)).unwrap();
        assert_eq!(out.u.max_abs(), 0.0);
        assert_eq!(out.v.max_abs(), 0.0);
    }

    #[test]
    fn zero_horizon_trajectory_is_single_state() {
        let g = make_grid(1, 40.0, 128).unwrap();
        let s = WaveState::at_rest(gaussian(g, 1.0, 1.0));
        let tr = evolve(&s, 0.0, &cfg(0.01), 1).unwrap();
        assert_eq!(tr.len(), 1);
    }

    #[test]
    fn recording_times() {
        let g = make_grid(1, 40.0, 128).unwrap();
        let s = WaveState::at_rest(gaussian(g, 1.0, 1.0));
        let tr = evolve(&s, 1.05, &cfg(0.1), 3).unwrap();
        let times = tr.times();
        let expected = [0.0, 0.3, 0.6, 0.9, 1.05];
        assert_eq!(times.len(), expected.len());
        for (a, b) in times.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{times:?}");
        }
    }

    #[test]
    fn horizon_guard() {
        let g = make_grid(1, 40.0, 256).unwrap();
        let s = WaveState::at_rest(gaussian(g, 1.0, 1.0));
        let h = wrap_horizon(&s);
        // e^{-x^2/2} > 1e-14 for |x| < 8.03
        assert!(h > 11.5 && h < 12.2, "{h}");
        let err = evolve(&s, h + 1.0, &cfg(0.1), 1).unwrap_err();
        assert!(matches!(err, Error::Horizon { .. }));
        assert!(evolve(&s, h + 1.0, &cfg(0.1).without_wrap_guard(), 10).is_ok());
    }

    #[test]
    fn reversibility() {
        let g = make_grid(1, 40.0, 256).unwrap();
        let s = WaveState::at_rest(gaussian(g, 1.0, 1.0));
        let c = cfg(0.05);
        let fwd = step_with(&s, c.dt, &c).unwrap();
        let back = step_with(&fwd, -c.dt, &c).unwrap();
        assert!(back.sup_distance(&s).unwrap() < 1e-10);
    }
}
