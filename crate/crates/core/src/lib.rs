//! Generalized q²-trigonometric functions, the Dunkl-type q-difference
//! operator, Jackson integrals and the generalized q²-Fourier transform on the
//! symmetric q-grid `{±qⁿ}`.
//!
//! Every series is evaluated in double precision first and re-evaluated in
//! software floating point when cancellation would spoil the result; see
//! [`series::SeriesControl`].

pub mod cli;
pub mod error;
pub mod gridio;
pub mod hyperseries;
pub mod numeric;
pub mod qcalculus;
pub mod qcore;
pub mod qfourier;
pub mod qtrig;
pub mod series;
pub mod verify;

pub use error::{QError, Result};
pub use numeric::C64;
pub use qcore::QParams;
pub use series::SeriesControl;
