//! Numerical verification of the functional inequalities used in the
//! decay argument, on random ensembles with hard spectral envelopes.

mod checks;
mod ensemble;
mod study;

pub use checks::{
    check_commutator_bound, check_embedding, check_pointwise_interp, check_power, check_product,
    commutator_l, commutator_rhs, embedding_constant, power_threshold, product_exponents_admissible,
    BoundVariant, InequalityReport,
};
pub use ensemble::{sample_gevrey_field, sample_with_rng, EnsembleSpec};
pub use study::{
    commutator_at_zero, ensemble_on, interp_sweep, refinement_study, run_ensemble, variant_study,
    EnsembleSummary, LemmaCheck, Perturbation, RefinementStudy, VariantOutcome, VariantStudy,
    DILATIONS, STABILITY_TOLERANCE,
};
