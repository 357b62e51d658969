use super::field::{PhysicalField, SpectralField};
use crate::error::{Error, Result};

/// Largest admissible `sigma * max|xi|`; `e^{600}` leaves room for the
/// remaining factors before the double range is exhausted.
pub const OVERFLOW_GUARD: f64 = 600.0;

/// Index `(sigma, s)` of the Gevrey space `G^{sigma,s}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GevreyIndex {
    pub sigma: f64,
    pub s: f64,
}

impl GevreyIndex {
    pub fn new(sigma: f64, s: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!(
                "Gevrey index needs finite sigma >= 0 and finite s, got ({sigma}, {s})"
            )));
        }
        Ok(GevreyIndex { sigma, s })
    }

    /// `H^s = G^{0,s}`.
    pub fn sobolev(s: f64) -> Self {
        GevreyIndex { sigma: 0.0, s }
    }

    pub const L2: GevreyIndex = GevreyIndex { sigma: 0.0, s: 0.0 };
}

/// Symbol `e^{sigma |xi|} <xi>^s |xi|^gradient_power`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierSpec {
    pub sigma: f64,
    pub s: f64,
    pub gradient_power: f64,
}

impl MultiplierSpec {
    pub const IDENTITY: MultiplierSpec = MultiplierSpec {
        sigma: 0.0,
        s: 0.0,
        gradient_power: 0.0,
    };

    pub fn gevrey(sigma: f64, s: f64) -> Self {
        MultiplierSpec {
            sigma,
            s,
            gradient_power: 0.0,
        }
    }

    /// `e^{sigma |D|}`.
    pub fn exponential(sigma: f64) -> Self {
        Self::gevrey(sigma, 0.0)
    }

    /// `|nabla|^theta`.
    pub fn gradient(theta: f64) -> Self {
        MultiplierSpec {
            sigma: 0.0,
            s: 0.0,
            gradient_power: theta,
        }
    }

    pub fn from_index(idx: GevreyIndex) -> Self {
        Self::gevrey(idx.sigma, idx.s)
    }

    pub fn is_identity(&self) -> bool {
        self.sigma == 0.0 && self.s == 0.0 && self.gradient_power == 0.0
    }

    /// Whether the unpaired Nyquist mode is annihilated.
    pub fn kills_nyquist(&self) -> bool {
        self.gradient_power > 0.0 || self.s != 0.0
    }

    pub fn symbol(&self, abs_xi: f64) -> f64 {
        let mut m = (self.sigma * abs_xi).exp();
        if self.s != 0.0 {
            m *= (1.0 + abs_xi * abs_xi).powf(0.5 * self.s);
        }
        if self.gradient_power != 0.0 {
            m *= abs_xi.powf(self.gradient_power);
        }
        m
    }

    fn validate(&self, max_abs_xi: f64) -> Result<()> {
        if !(self.sigma.is_finite() && self.s.is_finite() && self.gradient_power.is_finite())
            || self.gradient_power < 0.0
        {
            return Err(Error::invalid(format!("invalid multiplier {self:?}")));
        }
        let exponent = self.sigma * max_abs_xi;
        if exponent > OVERFLOW_GUARD {
            return Err(Error::Overflow {
                exponent,
                limit: OVERFLOW_GUARD,
            });
        }
        Ok(())
    }

    /// Symbol at every lattice point, Nyquist rule applied.
    pub(crate) fn weights(&self, grid: &super::Grid) -> Result<Vec<f64>> {
        self.validate(grid.max_abs_xi())?;
        let kill = self.kills_nyquist();
        Ok(grid
            .abs_xi()
            .iter()
            .zip(grid.nyquist_mask())
            .map(|(&xi, &nyq)| if kill && nyq { 0.0 } else { self.symbol(xi) })
            .collect())
    }
}

/// Multiply every coefficient by the symbol of `m`.
pub fn apply_multiplier(f: &SpectralField, m: &MultiplierSpec) -> Result<SpectralField> {
    let weights = m.weights(f.grid())?;
    let mut out = f.clone();
    for (z, w) in out.coefficients_mut().iter_mut().zip(weights) {
        *z *= w;
    }
    if out
        .coefficients()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Overflow {
            exponent: m.sigma * f.grid().max_abs_xi(),
            limit: OVERFLOW_GUARD,
        });
    }
    Ok(out)
}

/// Physical-space application; the identity symbol returns the input untouched.
pub fn apply_physical(f: &PhysicalField, m: &MultiplierSpec) -> Result<PhysicalField> {
    if m.is_identity() {
        return Ok(f.clone());
    }
    Ok(apply_multiplier(&f.forward(), m)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, PhysicalField};
    use rustfft::num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn identity_symbol_leaves_coefficients() {
        let g = make_grid(1, 5.0, 16).unwrap();
        let f = PhysicalField::from_real_fn(g, |x| (x[0]).cos() + 0.1 * x[0]);
        let s = f.forward();
        let t = apply_multiplier(&s, &MultiplierSpec::IDENTITY).unwrap();
        assert_eq!(s.coefficients(), t.coefficients());
    }

    #[test]
    fn single_mode_scaled_by_exponential() {
        let g = make_grid(1, 2.0 * PI, 32).unwrap();
        let f = PhysicalField::from_fn(g, |x| Complex64::from_polar(1.0, 2.0 * x[0]));
        let s = f.forward();
        let t = apply_multiplier(&s, &MultiplierSpec::exponential(0.5)).unwrap();
        let a = s.at(&[2]);
        let b = t.at(&[2]);
        assert!((b / a - Complex64::new(1f64.exp(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn gradient_power_annihilates_mean_and_nyquist() {
        let g = make_grid(1, 2.0 * PI, 8).unwrap();
        let s = crate::spectral::SpectralField::from_wavenumber_fn(g, |_| Complex64::new(1.0, 0.0));
        let t = apply_multiplier(&s, &MultiplierSpec::gradient(1.0)).unwrap();
        assert_eq!(t.at(&[0]).norm(), 0.0);
        assert_eq!(t.at(&[-4]).norm(), 0.0);
        assert!((t.at(&[3]).re - 3.0).abs() < 1e-14);
        let u = apply_multiplier(&s, &MultiplierSpec::exponential(0.1)).unwrap();
        assert!(u.at(&[-4]).norm() > 0.0);
    }

    #[test]
    fn guard_rejects_large_sigma() {
        let g = make_grid(1, 2.0 * PI, 64).unwrap();
        let s = crate::spectral::SpectralField::zeros(g);
        // max |xi| = 32 * sqrt(1) = 32
        assert!(apply_multiplier(&s, &MultiplierSpec::exponential(18.0)).is_ok());
        let err = apply_multiplier(&s, &MultiplierSpec::exponential(19.0)).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
        assert!(apply_multiplier(&s, &MultiplierSpec::exponential(-100.0)).is_ok());
    }

    #[test]
    fn gevrey_index_rejects_negative_sigma() {
        assert!(GevreyIndex::new(-0.1, 0.0).is_err());
        assert!(GevreyIndex::new(0.0, -3.0).is_ok());
    }
}
