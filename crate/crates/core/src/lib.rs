//! Outage analysis of limited-feedback beamforming under outdated CSI.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod codebook;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod specfun;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
