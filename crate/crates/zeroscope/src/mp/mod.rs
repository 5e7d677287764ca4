//! Configurable-precision binary floating point, complex arithmetic, and the
//! special-value kernels (constants, elementary functions, reciprocal gamma)
//! everything else is built on.

pub mod complex;
pub mod consts;
pub mod format;
pub mod functions;
pub mod gamma;
pub mod real;

pub use complex::Complex;
pub use real::{Prec, Real};
