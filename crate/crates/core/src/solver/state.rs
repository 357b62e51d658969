use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{check_same_grid, Grid, PhysicalField};

/// Cauchy data `(u, u_t)` at one instant.
#[derive(Clone, Debug)]
pub struct WaveState {
    pub u: PhysicalField,
    pub v: PhysicalField,
    pub time: f64,
}

impl WaveState {
    pub fn new(u: PhysicalField, v: PhysicalField, time: f64) -> Result<Self> {
        check_same_grid(u.grid(), v.grid())?;
        if !(u.is_finite() && v.is_finite() && time.is_finite()) {
            return Err(Error::invalid("wave state must be finite"));
        }
        Ok(WaveState { u, v, time })
    }

    /// Data at rest: `u_t = 0`.
    pub fn at_rest(u: PhysicalField) -> Self {
        let v = PhysicalField::zeros(u.grid().clone());
        WaveState { u, v, time: 0.0 }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        WaveState {
            u: PhysicalField::zeros(grid.clone()),
            v: PhysicalField::zeros(grid),
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite() && self.time.is_finite()
    }

    /// `max(sup|u - u'|, sup|v - v'|)`.
    pub fn sup_distance(&self, other: &WaveState) -> Result<f64> {
        Ok(self
            .u
            .sup_distance(&other.u)?
            .max(self.v.sup_distance(&other.v)?))
    }
}

/// Time integration scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Strang,
    Picard,
}

/// Parameters of `u_tt - Lap u + |u|^{p-1} u = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub p: u32,
    /// Sign of the nonlinearity; only the defocusing value `-1` is supported.
    pub mu: f64,
    pub dt: f64,
    pub scheme: Scheme,
    /// Refuse to integrate past the time at which waves wrap around the torus.
    pub wrap_guard: bool,
}

impl SolverConfig {
    pub fn new(p: u32, dt: f64) -> Result<Self> {
        let cfg = SolverConfig {
            p,
            mu: -1.0,
            dt,
            scheme: Scheme::Strang,
            wrap_guard: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn without_wrap_guard(mut self) -> Self {
        self.wrap_guard = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 || self.p.is_multiple_of(2) {
            return Err(Error::invalid(format!("p must be odd >= 3, got {}", self.p)));
        }
        if self.mu != -1.0 {
            return Err(Error::invalid("only the defocusing case mu = -1 is supported"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        Ok(())
    }
}

/// Time-ordered states produced by one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<WaveState>,
    pub config: SolverConfig,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.time).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&WaveState> {
        self.states.last()
    }

    /// Index of the last recorded state with `time <= t` (plus a rounding allowance).
    pub fn index_at(&self, t: f64) -> Option<usize> {
        let slack = 1e-9 * (1.0 + t.abs());
        self.states.iter().rposition(|s| s.time <= t + slack)
    }
}
