//! Ensemble maxima and their stability under grid refinement, band
//! enlargement and spatial dilation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{make_grid, GevreyIndex, Grid};

use super::checks::{
    check_commutator_bound, check_embedding, check_power, check_product, commutator_l, BoundVariant,
    InequalityReport,
};
use super::ensemble::{sample_gevrey_field, EnsembleSpec};

/// Relative change tolerated between ensemble maxima.
pub const STABILITY_TOLERANCE: f64 = 0.10;

/// Offset separating the second factor's seed stream in product checks.
const PARTNER_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// One lemma check, evaluated per sampled field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LemmaCheck {
    Embedding { from: GevreyIndex, to: GevreyIndex },
    Product { s0: f64, s1: f64, s2: f64 },
    Power { index: GevreyIndex, p: u32 },
    Commutator { sigma: f64, p: u32, theta: f64, variant: BoundVariant },
}

impl LemmaCheck {
    pub fn evaluate(&self, spec: &EnsembleSpec, seed: u64) -> Result<InequalityReport> {
        let f = sample_gevrey_field(&spec.with_seed(seed))?;
        match *self {
            LemmaCheck::Embedding { from, to } => check_embedding(&f, from, to),
            LemmaCheck::Product { s0, s1, s2 } => {
                let g = sample_gevrey_field(&spec.with_seed(seed ^ PARTNER_SEED))?;
                check_product(&f, &g, s0, s1, s2)
            }
            LemmaCheck::Power { index, p } => check_power(&f, index, p),
            LemmaCheck::Commutator { sigma, p, theta, variant } => {
                check_commutator_bound(&f, sigma, p, theta, variant)
            }
        }
    }

    /// The same check after the dilation `x -> x / lambda`.
    fn dilated(&self, lambda: f64) -> Self {
        match *self {
            LemmaCheck::Commutator { sigma, p, theta, variant } => LemmaCheck::Commutator {
                sigma: sigma * lambda,
                p,
                theta,
                variant,
            },
            other => other,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleSummary {
    pub reports: Vec<InequalityReport>,
    pub max_ratio: f64,
}

/// Evaluate `check` on seeds `first_seed .. first_seed + count` in parallel.
pub fn run_ensemble(check: &LemmaCheck, spec: &EnsembleSpec, first_seed: u64, count: usize) -> Result<EnsembleSummary> {
    if count == 0 {
        return Err(Error::invalid("ensemble needs at least one sample"));
    }
    let reports = (0..count as u64)
        .into_par_iter()
        .map(|i| check.evaluate(spec, first_seed.wrapping_add(i)))
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = reports.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(EnsembleSummary { reports, max_ratio })
}

fn relative_change(base: f64, other: f64) -> f64 {
    if base == other {
        0.0
    } else {
        (other - base).abs() / base.abs().max(other.abs())
    }
}

/// Ensemble maximum under one modification of the base setup.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub label: String,
    pub max_ratio: f64,
    pub relative_change: f64,
}

#[derive(Clone, Debug)]
pub struct RefinementStudy {
    pub base: EnsembleSummary,
    pub perturbations: Vec<Perturbation>,
}

impl RefinementStudy {
    pub fn stable(&self) -> bool {
        self.base.max_ratio.is_finite()
            && self
                .perturbations
                .iter()
                .all(|p| p.max_ratio.is_finite() && p.relative_change < STABILITY_TOLERANCE)
    }

    pub fn worst_change(&self) -> f64 {
        self.perturbations.iter().map(|p| p.relative_change).fold(0.0, f64::max)
    }
}

fn doubled_grid(spec: &EnsembleSpec) -> Result<EnsembleSpec> {
    let g = &spec.grid;
    let points: Vec<usize> = g.points().iter().map(|n| 2 * n).collect();
    spec.with_grid(Grid::with_axes(g.extent(), &points)?)
}

/// The base ensemble against `N -> 2N` and `band -> 2 band`.
///
/// The doubled band is evaluated on the refined grid when it does not fit
/// below the base Nyquist frequency.
pub fn refinement_study(check: &LemmaCheck, spec: &EnsembleSpec, first_seed: u64, count: usize) -> Result<RefinementStudy> {
    let base = run_ensemble(check, spec, first_seed, count)?;
    let fine = doubled_grid(spec)?;
    let wide = match spec.with_band_limit(2.0 * spec.band_limit) {
        Ok(s) => s,
        Err(_) => fine.with_band_limit(2.0 * spec.band_limit)?,
    };
    let mut perturbations = Vec::new();
    for (label, s) in [("N doubled", fine), ("band doubled", wide)] {
        let m = run_ensemble(check, &s, first_seed, count)?.max_ratio;
        perturbations.push(Perturbation {
            label: label.to_string(),
            max_ratio: m,
            relative_change: relative_change(base.max_ratio, m),
        });
    }
    Ok(RefinementStudy { base, perturbations })
}

/// Dilate the torus by `lambda` keeping the lattice: every sample becomes
/// `f(x / lambda)` up to a constant factor, and `sigma` scales with it.
fn dilated_spec(spec: &EnsembleSpec, lambda: f64) -> Result<EnsembleSpec> {
    let g = &spec.grid;
    let extent: Vec<f64> = g.extent().iter().map(|l| l * lambda).collect();
    let grid = Grid::with_axes(&extent, g.points())?;
    let mut s = spec.with_grid(grid)?;
    s.decay_sigma *= lambda;
    s = s.with_band_limit(spec.band_limit / lambda)?;
    Ok(s)
}

/// Dilation factors used by [`variant_study`].
pub const DILATIONS: [f64; 2] = [0.5, 0.25];

#[derive(Clone, Debug)]
pub struct VariantOutcome {
    pub variant: BoundVariant,
    pub study: RefinementStudy,
}

impl VariantOutcome {
    pub fn bounded(&self) -> bool {
        self.study.stable()
    }
}

#[derive(Clone, Debug)]
pub struct VariantStudy {
    pub outcomes: Vec<VariantOutcome>,
}

impl VariantStudy {
    /// The variants whose ensemble maximum survived every perturbation.
    pub fn bounded_variants(&self) -> Vec<BoundVariant> {
        self.outcomes.iter().filter(|o| o.bounded()).map(|o| o.variant).collect()
    }
}

/// Evaluate both two-dimensional commutator bounds under grid refinement,
/// band doubling and the dilations in [`DILATIONS`].
///
/// A constant independent of `f` must survive dilation; only exponent
/// placements that are scale-invariant can.
pub fn variant_study(spec: &EnsembleSpec, sigma: f64, p: u32, theta: f64, first_seed: u64, count: usize) -> Result<VariantStudy> {
    if spec.grid.dim() != 2 {
        return Err(Error::invalid("variant study needs a two-dimensional grid"));
    }
    let mut outcomes = Vec::new();
    for variant in BoundVariant::ALL {
        let check = LemmaCheck::Commutator { sigma, p, theta, variant };
        let mut study = refinement_study(&check, spec, first_seed, count)?;
        for lambda in DILATIONS {
            let s = dilated_spec(spec, lambda)?;
            let m = run_ensemble(&check.dilated(lambda), &s, first_seed, count)?.max_ratio;
            study.perturbations.push(Perturbation {
                label: format!("dilation {lambda}"),
                max_ratio: m,
                relative_change: relative_change(study.base.max_ratio, m),
            });
        }
        outcomes.push(VariantOutcome { variant, study });
    }
    Ok(VariantStudy { outcomes })
}

/// `max_x |L f|` over the ensemble at `sigma = 0`; zero when the two
/// branches coincide on every sample.
pub fn commutator_at_zero(spec: &EnsembleSpec, p: u32, first_seed: u64, count: usize) -> Result<f64> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let f = sample_gevrey_field(&spec.with_seed(first_seed.wrapping_add(i)))?;
            Ok(commutator_l(&f, 0.0, p)?.max_abs())
        })
        .try_reduce(|| 0.0, |a, b| Ok(f64::max(a, b)))
}

/// Dense sweep of the scalar interpolation inequality on `[0, x_max]`.
/// Returns the number of violating points.
pub fn interp_sweep(x_max: f64, points: usize, thetas: &[f64]) -> usize {
    let per = points / thetas.len().max(1);
    thetas
        .par_iter()
        .map(|&theta| {
            (0..per)
                .filter(|&i| {
                    let x = x_max * i as f64 / (per.max(2) - 1) as f64;
                    !super::checks::check_pointwise_interp(x, theta)
                })
                .count()
        })
        .sum()
}

/// Unit-amplitude ensemble on a cubic grid, seed 0.
pub fn ensemble_on(dim: usize, extent: f64, points: usize, decay_sigma: f64, band_limit: f64) -> Result<EnsembleSpec> {
    EnsembleSpec::new(make_grid(dim, extent, points)?, decay_sigma, band_limit, 1.0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_ensemble_bounded() {
        let spec = ensemble_on(1, 32.0, 128, 0.5, 10.0).unwrap();
        let check = LemmaCheck::Embedding {
            from: GevreyIndex::new(0.3, 0.0).unwrap(),
            to: GevreyIndex::new(0.1, 1.0).unwrap(),
        };
        let out = run_ensemble(&check, &spec, 0, 16).unwrap();
        assert!(out.max_ratio <= 1.0);
        assert_eq!(out.reports.len(), 16);
    }

    #[test]
    fn grid_doubling_is_exact_for_resolved_powers() {
        // cube of a band-4 field stays below the Nyquist frequency 12.57
        let spec = ensemble_on(1, 32.0, 128, 0.5, 4.0).unwrap();
        let check = LemmaCheck::Power {
            index: GevreyIndex::new(0.1, 0.5).unwrap(),
            p: 3,
        };
        let st = refinement_study(&check, &spec, 1, 8).unwrap();
        assert!(st.perturbations[0].relative_change < 1e-10);
    }

    #[test]
    fn dilation_scaling_law() {
        // statement ratio picks up lambda^{-(p - 2 + 2 theta)}, proof is invariant
        let spec = ensemble_on(2, 16.0, 32, 0.5, 4.0).unwrap();
        let (sigma, p, theta) = (0.1, 3, 0.5);
        for variant in BoundVariant::ALL {
            let check = LemmaCheck::Commutator { sigma, p, theta, variant };
            let a = check.evaluate(&spec, 5).unwrap().ratio;
            let s = dilated_spec(&spec, 0.5).unwrap();
            let b = check.dilated(0.5).evaluate(&s, 5).unwrap().ratio;
            let expect = match variant {
                BoundVariant::Statement => 4.0,
                BoundVariant::Proof => 1.0,
            };
            assert!((b / a - expect).abs() < 1e-9 * expect, "{variant:?}: {}", b / a);
        }
    }

    #[test]
    fn zero_sigma_commutator_vanishes() {
        let spec = ensemble_on(1, 32.0, 64, 0.5, 5.0).unwrap();
        assert_eq!(commutator_at_zero(&spec, 3, 0, 4).unwrap(), 0.0);
    }

    #[test]
    fn small_interp_sweep() {
        assert_eq!(interp_sweep(100.0, 50_000, &[0.0, 0.25, 0.5, 0.75, 1.0]), 0);
    }
}
