//! The m-fold inequalities: instance types, checkers, verdicts and slack.

mod checks;
mod matrix;
mod slack;
mod verdict;

pub use checks::{
    application_cross_terms, application_cube_bound, application_square_bound, check_application,
    check_cbs, check_chebyshev, check_holder, check_minkowski, holder_sides,
    is_holder_equality_case, ApplicationInstance,
};
pub(crate) use checks::{
    application_sides, cbs_sides, chebyshev_sides,
    holder_equality_by_powers, holder_sides_unchecked, minkowski_sides, power_sum,
};
pub use matrix::{ExponentVector, NonNegMatrix, SortedMatrix};
pub use slack::{slack_of_sides, ExactSlack, Slack};
pub use verdict::{
    recheck_evidence, CheckConfig, CheckMode, Evidence, PowerProduct, Relation, Sides, Verdict,
};
