//! Log-spectral "outer product" of two real vectors, the inequality bounds
//! built on top of it, and a seeded randomized campaign that evaluates both
//! sides of every bound.
//!
//! For vectors `a`, `b` in a finite-dimensional normed space the outer
//! product is
//!
//! ```text
//! (a;b) = Σ_{λ ∈ Spec(abᵀ)} ∫_{‖a‖}^{‖b‖} ln|t − λ| dt
//! ```
//!
//! where `Spec(abᵀ) = {⟨a,b⟩, 0, …, 0}` for the rank-one matrix `abᵀ`.
//! Every integral is evaluated in closed form; quadrature and
//! characteristic-polynomial routines are kept alongside as independent
//! oracles.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod integrals;
pub mod json;
pub mod spectrum;
pub mod sum;
pub mod vector;

pub use bounds::{
    min_log_distance, prop_key_sides, rhs_correction_sum, theorem1_sides, theorem2_sides,
    verify_theorem2_lhs, ExtendedReal, InequalitySides, Statement, Status,
};
pub use error::{Error, Result};
pub use harness::{fuzz_campaign, run_trial, sample_admissible_pair, CampaignConfig, CampaignReport, TrialRecord};
pub use integrals::{
    adaptive_logdet_integral, integral_log_abs, log_abs_primitive, outer_product, LogIntegralResult,
    QuadratureConfig,
};
pub use spectrum::{
    char_poly, det_rank_one_shift, det_via_elimination, rank_one_spectrum, CharPoly, SpectrumMode,
    SpectrumMultiset, SquareMatrix,
};
pub use vector::{check_admissible, norm, AdmissibilityReport, Hypotheses, HypothesisFailure, NormKind, Vector};
