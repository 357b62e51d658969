use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::spectral::{
    apply_physical, dealiased_product, gevrey_norm, gevrey_norm_spectral, gradient_norm,
    pointwise_power, pure_power, GevreyIndex, MultiplierSpec, PhysicalField, SpectralField,
};

/// One evaluation of an inequality `lhs <= C rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub lemma: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, with `0/0 = 0` and `x/0 = inf` for `x > 0`.
    pub ratio: f64,
    pub params: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub fn new(lemma: impl Into<String>, lhs: f64, rhs: f64, params: &[(&str, f64)]) -> Result<Self> {
        let lemma = lemma.into();
        if !(lhs.is_finite() && rhs.is_finite()) || lhs < 0.0 || rhs < 0.0 {
            return Err(Error::invalid(format!(
                "{lemma}: sides must be finite and nonnegative, got lhs = {lhs}, rhs = {rhs}"
            )));
        }
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Ok(InequalityReport {
            lemma,
            lhs,
            rhs,
            ratio,
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        })
    }
}

/// Zero the unpaired Nyquist modes, which no multiplier with `s != 0` sees.
fn without_nyquist(f: &PhysicalField) -> SpectralField {
    let mut spec = f.forward();
    let mask = spec.grid().nyquist_mask().to_vec();
    for (z, nyq) in spec.coefficients_mut().iter_mut().zip(mask) {
        if nyq {
            *z = Default::default();
        }
    }
    spec
}

/// Explicit lattice constant `max_xi <xi>^{s'-s} e^{(sigma'-sigma)|xi|}`.
pub fn embedding_constant(grid: &crate::spectral::Grid, from: GevreyIndex, to: GevreyIndex) -> f64 {
    grid.abs_xi()
        .iter()
        .zip(grid.nyquist_mask())
        .filter(|(_, &nyq)| !nyq)
        .map(|(&xi, _)| {
            (1.0 + xi * xi).powf(0.5 * (to.s - from.s)) * ((to.sigma - from.sigma) * xi).exp()
        })
        .fold(0.0, f64::max)
}

/// `||f||_{G^{to}} <= C ||f||_{G^{from}}` with the explicit constant; ratio <= 1.
pub fn check_embedding(f: &PhysicalField, from: GevreyIndex, to: GevreyIndex) -> Result<InequalityReport> {
    if to.sigma >= from.sigma {
        return Err(Error::invalid(format!(
            "embedding needs target sigma {} < source sigma {}",
            to.sigma, from.sigma
        )));
    }
    let spec = without_nyquist(f);
    let c = embedding_constant(spec.grid(), from, to);
    let lhs = gevrey_norm_spectral(&spec, to)?;
    let rhs = c * gevrey_norm_spectral(&spec, from)?;
    InequalityReport::new(
        "embedding",
        lhs,
        rhs,
        &[
            ("sigma_from", from.sigma),
            ("s_from", from.s),
            ("sigma_to", to.sigma),
            ("s_to", to.s),
            ("constant", c),
        ],
    )
}

/// Exponent conditions of the Sobolev product estimate in dimension `d`.
pub fn product_exponents_admissible(s0: f64, s1: f64, s2: f64, d: usize) -> bool {
    let sum = s0 + s1 + s2;
    let max = s0.max(s1).max(s2);
    let half_d = d as f64 / 2.0;
    let c1 = sum >= max;
    let c2 = sum >= half_d;
    let both_equal = sum == max && sum == half_d;
    c1 && c2 && !both_equal
}

/// `||f g||_{H^{-s0}} <= C ||f||_{H^{s1}} ||g||_{H^{s2}}`.
pub fn check_product(f: &PhysicalField, g: &PhysicalField, s0: f64, s1: f64, s2: f64) -> Result<InequalityReport> {
    let d = f.grid().dim();
    if !product_exponents_admissible(s0, s1, s2, d) {
        return Err(Error::invalid(format!(
            "product exponents ({s0}, {s1}, {s2}) violate the hypothesis in d = {d}"
        )));
    }
    let fg = dealiased_product(f, g)?;
    let lhs = gevrey_norm(&fg, GevreyIndex::sobolev(-s0))?;
    let rhs = gevrey_norm(f, GevreyIndex::sobolev(s1))? * gevrey_norm(g, GevreyIndex::sobolev(s2))?;
    InequalityReport::new("product", lhs, rhs, &[("s0", s0), ("s1", s1), ("s2", s2), ("d", d as f64)])
}

/// Smallest admissible `s` for the Gevrey power estimate.
pub fn power_threshold(d: usize, p: u32) -> f64 {
    let p = p as f64;
    (d as f64 / 2.0 - 1.0 / p).max(0.5 * (1.0 - 1.0 / p))
}

/// `||f^p||_{G^{sigma,s-1}} <= C ||f||_{G^{sigma,s}}^p`.
pub fn check_power(f: &PhysicalField, idx: GevreyIndex, p: u32) -> Result<InequalityReport> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::invalid(format!("p must be odd >= 3, got {p}")));
    }
    let d = f.grid().dim();
    let threshold = power_threshold(d, p);
    if idx.s < threshold {
        return Err(Error::invalid(format!(
            "s = {} below threshold {threshold} for d = {d}, p = {p}",
            idx.s
        )));
    }
    let fp = pure_power(f, p)?;
    let lower = GevreyIndex {
        sigma: idx.sigma,
        s: idx.s - 1.0,
    };
    let lhs = gevrey_norm(&fp, lower)?;
    let rhs = gevrey_norm(f, idx)?.powi(p as i32);
    InequalityReport::new(
        "power",
        lhs,
        rhs,
        &[("sigma", idx.sigma), ("s", idx.s), ("p", p as f64), ("d", d as f64)],
    )
}

/// `L f = |e^{sigma|D|} f|^{p-1} e^{sigma|D|} f - e^{sigma|D|}(|f|^{p-1} f)`.
pub fn commutator_l(f: &PhysicalField, sigma: f64, p: u32) -> Result<PhysicalField> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    let amp = MultiplierSpec::exponential(sigma);
    let big_f = apply_physical(f, &amp)?;
    let first = pointwise_power(&big_f, p)?;
    let second = apply_physical(&pointwise_power(f, p)?, &amp)?;
    first.axpy(-1.0, &second)
}

/// Exponent placement of the two-dimensional commutator bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundVariant {
    /// `sigma^theta ||f||^{p-1+theta} ||nabla f||^{1-theta}`
    Statement,
    /// `sigma^theta ||nabla f||^{p-1+theta} ||f||^{1-theta}`
    Proof,
}

impl BoundVariant {
    pub fn name(&self) -> &'static str {
        match self {
            BoundVariant::Statement => "statement",
            BoundVariant::Proof => "proof",
        }
    }

    pub const ALL: [BoundVariant; 2] = [BoundVariant::Statement, BoundVariant::Proof];
}

/// Right-hand side of the commutator bound from precomputed norms.
pub fn commutator_rhs(
    d: usize,
    sigma: f64,
    p: u32,
    theta: f64,
    variant: BoundVariant,
    f_norm: f64,
    grad_norm: f64,
) -> Result<f64> {
    let p = p as f64;
    match d {
        1 => {
            if !(0.0..=1.0).contains(&theta) {
                return Err(Error::invalid(format!("theta = {theta} outside [0, 1]")));
            }
            Ok(sigma.powf(theta)
                * f_norm.powf((p + 1.0 - 2.0 * theta) / 2.0)
                * grad_norm.powf((p - 1.0 + 2.0 * theta) / 2.0))
        }
        2 => {
            if !(theta > 0.0 && theta < 1.0) {
                return Err(Error::invalid(format!("theta = {theta} outside (0, 1)")));
            }
            let (a, b) = match variant {
                BoundVariant::Statement => (f_norm, grad_norm),
                BoundVariant::Proof => (grad_norm, f_norm),
            };
            Ok(sigma.powf(theta) * a.powf(p - 1.0 + theta) * b.powf(1.0 - theta))
        }
        _ => Err(Error::invalid(format!("commutator bound defined for d = 1, 2, got {d}"))),
    }
}

/// `||L f||_{L^2}` against the commutator bound.
pub fn check_commutator_bound(
    f: &PhysicalField,
    sigma: f64,
    p: u32,
    theta: f64,
    variant: BoundVariant,
) -> Result<InequalityReport> {
    let d = f.grid().dim();
    // validate theta before the expensive part
    commutator_rhs(d, 1.0, p, theta, variant, 1.0, 1.0)?;
    let lf = commutator_l(f, sigma, p)?;
    let lhs = gevrey_norm(&lf, GevreyIndex::L2)?;
    let idx = GevreyIndex::new(sigma, 0.0)?;
    let rhs = commutator_rhs(d, sigma, p, theta, variant, gevrey_norm(f, idx)?, gradient_norm(f, idx)?)?;
    let name = match d {
        1 => "commutator-d1".to_string(),
        _ => format!("commutator-d2-{}", variant.name()),
    };
    InequalityReport::new(
        name,
        lhs,
        rhs,
        &[("sigma", sigma), ("p", p as f64), ("theta", theta), ("d", d as f64)],
    )
}

/// Scalar interpolation `1 - e^{-x} <= x^theta` for `x >= 0`, `theta in [0, 1]`.
pub fn check_pointwise_interp(x: f64, theta: f64) -> bool {
    -(-x).exp_m1() <= x.powf(theta)
}
