// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod optimize;
pub mod response;
pub mod specfun;
pub mod sweep;

pub use error::{Error, Result};
