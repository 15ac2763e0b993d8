//! Expected volumes and facet functionals of random beta polytopes.
//!
//! The convex hull of independent points `X_i` with densities
//! `c_{d,β_i} (1 - |x|²)^{β_i}` on the unit ball of R^d has closed-form
//! expected volume and expected `Σ_F dist(0, F)^a Vol(F)^b` over facets.
//! [`closedform`] evaluates those expressions, [`geometry`] and
//! [`sampling`] estimate the same quantities by simulation.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the common double-precision instantiations.
//!
//! ```
//! use betapoly::{expected_volume, BetaVector, PolytopeSpec};
//!
//! let spec = PolytopeSpec::new(1, BetaVector::from_values(&[0.0f64, 0.0])?)?;
//! let e = expected_volume(&spec)?;
//! assert!((e.value - 2.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), betapoly::Error>(())
//! ```

pub mod closedform;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod specfun;

pub use closedform::{
    enumerate_subsets_grouped, expected_volume, expected_volume_with, expected_wieacker,
    expected_wieacker_with, ktt_equal_beta, ktt_equal_beta_with, kubota_cross_check,
    kubota_cross_check_with, lemma_section_value, miles_moment, BetaVector, EvalOptions,
    Evaluation, KubotaCheck, PolytopeSpec, SubsetGroup, WieackerParams,
};
pub use error::{Error, Result};
pub use geometry::{
    convex_hull_facets, mc_estimate, polytope_volume, simplex_volume, wieacker_T, Facet,
    FacetSet, Functional, McEstimate,
};
pub use quadrature::{
    integrate_weighted, integrate_weighted_with, jacobi_rule, IntegrationOptions,
    QuadratureRule,
};
pub use sampling::{
    empirical_halfspace_prob, project_first_k, sample_beta_point, sample_sphere_point,
    RandomSource, SampleBatch,
};
pub use scalar::Scalar;
pub use specfun::{
    ball_volume, beta_cdf, beta_density, beta_norm_const, log_gamma, reg_inc_beta, BetaParam,
};

pub type BetaParamF64 = BetaParam<f64>;
pub type BetaVectorF64 = BetaVector<f64>;
pub type PolytopeSpecF64 = PolytopeSpec<f64>;
pub type WieackerParamsF64 = WieackerParams<f64>;
pub type EvaluationF64 = Evaluation<f64>;
pub type QuadratureRuleF64 = QuadratureRule<f64>;
pub type FacetSetF64 = FacetSet<f64>;
pub type McEstimateF64 = McEstimate<f64>;

pub type BetaParamF32 = BetaParam<f32>;
pub type BetaVectorF32 = BetaVector<f32>;
pub type PolytopeSpecF32 = PolytopeSpec<f32>;
pub type WieackerParamsF32 = WieackerParams<f32>;
pub type EvaluationF32 = Evaluation<f32>;
