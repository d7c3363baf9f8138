// `!(a < b)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accel;
pub mod cli;
pub mod cocycle;
pub mod dos;
pub mod error;
pub mod model;
pub mod numeric;
pub mod polyalg;
pub mod verify;
pub mod winding;
pub mod zeros;

pub use error::{Error, Result};
