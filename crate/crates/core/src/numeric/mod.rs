//! Exact rational arithmetic and rigorous interval arithmetic.

mod dyadic;
mod expr;
mod interval;
mod rational;

pub use dyadic::{Dyadic, Round};
pub use expr::{refine_until_ordered, validate_schedule, Expr, Refined, DEFAULT_SCHEDULE};
pub use interval::{rigorous_compare, RigorInterval, TriOrder};
pub use rational::{compare_power_products, lcm_all, rat_pow_int, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero or by an enclosure containing zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("negative base with a fractional exponent")]
    NegativeBase,
    #[error("exponent must be positive")]
    NonPositiveExponent,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("interval lower bound exceeds upper bound")]
    InvertedBounds,
    #[error("invalid precision schedule: {0}")]
    BadSchedule(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
