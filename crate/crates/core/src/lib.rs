//! Bures geometry of density matrices near rank-changing points, Lindblad
//! dynamics reaching or leaving them, and the metric cones that describe the
//! geometry at higher-rank boundaries.

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod acceptance;
pub mod bures;
pub mod cone;
pub mod error;
pub mod fitting;
pub mod linalg;
pub mod lindblad;
pub mod ode;
pub mod scenarios;

pub use error::{Error, Result};
