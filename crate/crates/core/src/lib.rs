//! Rigorous checking of the m-fold Hölder, Cauchy–Buniakovski–Schwarz,
//! Minkowski and Chebyshev inequalities and the n-gon Menelaus theorem,
//! with proof traces that unroll each m-fold claim into two-fold steps.

pub mod error;
pub mod gen;
pub mod geometry;
pub mod inequality;
pub mod instance;
pub mod numeric;
pub mod report;
pub mod trace;

pub use error::{Error, Result};
