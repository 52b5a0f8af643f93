//! Earthquake maps of the hyperbolic disk along finite measured laminations.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod barycentric;
pub mod circle;
pub mod convergence;
pub mod earthquake;
pub mod error;
pub mod generators;
pub mod hyp;
pub mod io;
pub mod lamination;
pub mod par;

pub use error::{QuakeError, Result};
