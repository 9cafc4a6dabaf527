//! Numerics for quaternionic Fock spaces of slice regular functions.

pub mod bank;
pub mod berezin;
pub mod bmo;
pub mod error;
pub mod fock;
pub mod gauss;
pub mod measure;
pub mod proj;
pub mod quad;
pub mod quat;
pub mod slice;
pub mod toeplitz;

pub use error::{Error, Result};
pub use quat::{Quat, Unit};
pub use slice::{RegularPolynomial, SliceFunction};
