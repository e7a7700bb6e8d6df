//! Exact rational linear algebra on labelled bases.
//!
//! No tolerances anywhere: all arithmetic is over arbitrary-precision rationals.

mod matrix;
mod presented;

pub use matrix::{Echelon, Matrix};
pub use presented::{PresentedMap, PresentedSpace};
