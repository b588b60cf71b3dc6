//! Stablecoin risk analytics: collateral comparison metrics, upstream
//! incident-risk scoring, downstream holder composition, and a peg-dynamics
//! simulator with pluggable stabilization controllers.

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collateral;
pub mod downstream;
pub mod error;
pub mod io;
pub mod model;
pub mod peg;
pub mod report;
pub mod upstream;

pub use error::{Error, Result};
