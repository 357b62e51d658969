use crate::error::Result;
use crate::spectral::{
    apply_multiplier, gradient_norm_spectral, lp_power, weighted_norm, GevreyIndex,
    MultiplierSpec, PhysicalField, SpectralField,
};

use super::state::{SolverConfig, WaveState};

/// The three terms of the (modified) energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyParts {
    /// `1/2 ||nabla U||^2`
    pub gradient: f64,
    /// `1/2 ||V||^2`
    pub kinetic: f64,
    /// `1/(p+1) ||U||_{L^{p+1}}^{p+1}`
    pub potential: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.gradient + self.kinetic + self.potential
    }

    /// Quadratic part only, conserved by the free wave group.
    pub fn linear(&self) -> f64 {
        self.gradient + self.kinetic
    }
}

/// Energy of the amplified pair `U = e^{sigma|D|} u`, `V = e^{sigma|D|} u_t`,
/// from precomputed spectra. At `sigma = 0` the potential term uses `u` itself.
pub(crate) fn energy_parts_spectral(
    u_phys: &PhysicalField,
    u_hat: &SpectralField,
    v_hat: &SpectralField,
    sigma: f64,
    p: u32,
) -> Result<EnergyParts> {
    let idx = GevreyIndex { sigma, s: 0.0 };
    let grad = gradient_norm_spectral(u_hat, idx)?;
    let vel = weighted_norm(v_hat, &MultiplierSpec::exponential(sigma))?;
    let q = (p + 1) as f64;
    let potential = if sigma == 0.0 {
        lp_power(u_phys, q)
    } else {
        let amplified = apply_multiplier(u_hat, &MultiplierSpec::exponential(sigma))?.inverse();
        lp_power(&amplified, q)
    };
    Ok(EnergyParts {
        gradient: 0.5 * grad * grad,
        kinetic: 0.5 * vel * vel,
        potential: potential / q,
    })
}

pub fn energy_parts(state: &WaveState, sigma: f64, p: u32) -> Result<EnergyParts> {
    energy_parts_spectral(&state.u, &state.u.forward(), &state.v.forward(), sigma, p)
}

/// Conserved energy `1/2||nabla u||^2 + 1/2||u_t||^2 + 1/(p+1)||u||_{p+1}^{p+1}`.
pub fn energy_e0(state: &WaveState, cfg: &SolverConfig) -> f64 {
    energy_parts(state, 0.0, cfg.p)
        .expect("sigma = 0 cannot overflow")
        .total()
}
