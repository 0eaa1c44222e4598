//! Numerical checks of the schedule guarantees.
//!
//! Every check returns a [`VerificationReport`] whose slacks are signed and
//! normalized: identities are compared at `1e-9` relative, inequality slacks
//! along trajectories at `1e-7` times the natural scale of the instance
//! (`||x_1 - x*||^2` or `||g_0||^2`), one-step descent bounds at `1e-9`.

mod fit;
mod lemmas;
pub mod rates;
mod schedules;
mod strong;
pub mod suite;
mod worst_case;

pub use fit::{join_step_census, rate_fit, JoinCensus, RateFit};
pub use lemmas::{
    check_checkpoint_rates, check_lemma_key, check_lemma_key2, check_lemma_key3, check_primitive,
    check_descent_bound, check_primitive_run, check_refine1, LemmaRun,
};
pub use schedules::{check_anytime_bounds, check_join_values, check_silver_identities, check_stepsizes_exceed_one};
pub use strong::{calibrate_c0, check_strongly_convex, C0Calibration, StrongConvexOutcome, CONTRACTION_ENVELOPE};
pub use rates::{check_intermediate_horizons, check_rate_separation, default_t_grid, rate_series, RateSeries};
pub use suite::{run_suite, Suite, SuiteOptions, SuiteReport, DEFAULT_C0};
pub use worst_case::{worst_case_quadratic, worst_case_series, WorstCaseSeries, LAMBDA_FLOOR, LAMBDA_GRID};

pub use crate::report::VerificationReport;
use crate::Scalar;

/// Relative tolerance of analytic identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance of trajectory inequalities, relative to the natural scale.
pub const SLACK_TOL: f64 = 1e-7;
/// Tolerance of the one-step descent bound.
pub const DESCENT_TOL: f64 = 1e-9;

/// `base`, loosened to the resolution of `T` when `T` is coarser than
/// binary64 (for `f64` this is `base` itself).
pub(crate) fn tol_for<T: Scalar>(base: f64) -> f64 {
    base.max(256.0 * T::epsilon().as_f64())
}
