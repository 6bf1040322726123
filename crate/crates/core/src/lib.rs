// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ctrw;
pub mod error;
pub mod fractional;
pub mod geometry;
pub mod graph;
pub mod memory;
mod par;
pub mod quad;
pub mod soe;
pub mod special;
pub mod spectral;
pub mod volterra;
pub mod waiting;

pub use error::{Error, Result};
