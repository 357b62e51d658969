use crate::spectral::{Complex64, Grid, SpectralField};

use super::state::WaveState;

/// `sin(t r) / r`, continued by its limit `t` at `r = 0`.
pub fn sinc_symbol(t: f64, r: f64) -> f64 {
    if r == 0.0 {
        t
    } else {
        (t * r).sin() / r
    }
}

/// Tables of `cos(t|xi|)`, `sin(t|xi|)/|xi|` and `-|xi| sin(t|xi|)` on a grid.
pub(crate) struct Propagator {
    pub cos: Vec<f64>,
    pub sinc: Vec<f64>,
    pub msin: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: &Grid, t: f64) -> Self {
        let n = grid.len();
        let mut cos = Vec::with_capacity(n);
        let mut sinc = Vec::with_capacity(n);
        let mut msin = Vec::with_capacity(n);
        for &r in grid.abs_xi() {
            let (s, c) = (t * r).sin_cos();
            cos.push(c);
            sinc.push(if r == 0.0 { t } else { s / r });
            msin.push(-r * s);
        }
        Propagator { cos, sinc, msin }
    }

    pub fn apply(&self, u: &mut [Complex64], v: &mut [Complex64]) {
        for i in 0..u.len() {
            let (u0, v0) = (u[i], v[i]);
            u[i] = u0 * self.cos[i] + v0 * self.sinc[i];
            v[i] = u0 * self.msin[i] + v0 * self.cos[i];
        }
    }
}

/// Spectral form of the free wave group.
pub fn propagate_spectral(u: &SpectralField, v: &SpectralField, t: f64) -> (SpectralField, SpectralField) {
    let prop = Propagator::new(u.grid(), t);
    let mut uu = u.clone();
    let mut vv = v.clone();
    prop.apply(uu.coefficients_mut(), vv.coefficients_mut());
    (uu, vv)
}

/// Exact solution of `u_tt = Lap u` over a time span `t`.
pub fn linear_propagate(state: &WaveState, t: f64) -> WaveState {
    let (u, v) = propagate_spectral(&state.u.forward(), &state.v.forward(), t);
    WaveState {
        u: u.inverse(),
        v: v.inverse(),
        time: state.time + t,
    }
}
