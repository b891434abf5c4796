//! Four-point curvature conditions for finite metric spaces.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * [`metric`]: validated finite metric spaces and labeled quadruples,
//! * [`model`]: comparison angles and exact model geometries,
//! * [`conditions`]: the four-point inequalities as residuals,
//! * [`embedding`]: isometric embedding of 4-point metrics into the plane or
//!   a round sphere,
//! * [`iteration`]: the midpoint-sequence argument replayed numerically,
//! * [`experiments`]: seeded Monte Carlo campaigns.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod conditions;
pub mod embedding;
pub mod experiments;
pub mod iteration;
pub mod metric;
pub mod model;

pub use conditions::{
    check_all_labelings, midpoint_residual, one_plus_three_residual, star_minus_residual,
    star_plus_residual, star_residual, Condition, ConditionReport, Residual, Tolerance, Verdict,
};
pub use embedding::{embed_any, embed_plane, embed_sphere, Certificate, EmbeddingResult, Target};
pub use experiments::{
    reproduce_counterexample, run_campaign, run_implication_test, run_positivity, run_violation_search,
    Campaign, CampaignKind, ConditionStats,
};
pub use iteration::{run_iteration, verify_recursion, IterationError, IterationTrace};
pub use metric::{counterexample_f, FiniteMetricSpace, LabeledQuadruple, MetricError};
pub use model::{
    comparison_angle, distance, midpoint, quadruple_from_points, sample, GeometryError, Kappa,
    ModelPoint, ModelSpace, SampleOptions,
};
