use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a unit imaginary quaternion (|Re| = {re:.3e}, |Im| = {im:.3e})")]
    NotUnit { re: f64, im: f64 },

    #[error("imaginary units are not orthogonal (inner product {0:.3e})")]
    NotOrthogonal(f64),

    #[error("imaginary units are linearly dependent")]
    DependentUnits,

    #[error("kernel argument alpha*|z|*|w| = {0:.3e} exceeds the overflow cap")]
    KernelOverflow(f64),

    #[error("kernel series did not reach its tail tolerance within {0} terms")]
    Truncation(usize),

    #[error("quadrature window insufficient: outer nodes carry {0:.3e} of the integral")]
    Window(f64),

    #[error("integrability surrogate failed at probe {probe}: {detail}")]
    Integrability { probe: String, detail: String },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("monomial index {0} is outside floating-point range")]
    Range(usize),

    #[error("function is not real-valued (imaginary part {0:.3e})")]
    NotReal(f64),

    #[error("weight mismatch: {0} vs {1}")]
    AlphaMismatch(f64, f64),

    #[error("step size {0:.3e} too small for finite differences")]
    Step(f64),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
