//! Identity checks, conjecture probes, the Euclid constant, the conditioning
//! slope fit and the three-way conditioning comparison.

mod comparison;
mod constant;
mod identities;
mod merge;
mod series;
mod similarity;
mod slope;
mod suite;

pub use comparison::{conditioning_comparison, merge_band, precision_label, Band, ComparisonRow};
pub use constant::{euclid_constant, floor_reconstruction, EuclidConstantEstimate};
pub use identities::{egyptian_number_check, egyptian_poly_check, euclid_values, IdentityOutcome};
pub use merge::{merge_profile, MergeProfile};
pub use series::{series_probe, SeriesClass, SeriesReport, MAX_SERIES_TERMS};
pub use similarity::{similarity_criteria, SimilarityReport, SPACING_RANGE};
pub use slope::{
    condition_slope_fit, fit_samples, linear_fit, loglog_fit, max_conditions, ConditionSample, SlopeFit,
};
pub use suite::{random_rationals, run_suite, CheckResult, CheckStatus, SuiteConfig, SuiteReport, VERIFY_MAX_K};
