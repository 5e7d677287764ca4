//! zeroscope: growth classification and zero localization for entire
//! functions given by Maclaurin coefficient streams.
//!
//! The pipeline: a [`series::CoefficientStream`] supplies coefficients c_n;
//! the factorial-weighted series Σ n!·c_n zⁿ is classified by its radius of
//! convergence; streams whose weighted series is entire (and whose
//! coefficients keep appearing) are flagged as having infinitely many zeros,
//! and the claim is corroborated at desk scale by argument-principle zero
//! counts in growing disks. Exact-rational machinery verifies the derivative
//! identity f⁽ⁿ⁾(0) = kⁿQ(n) behind the classification.

pub mod exact;
pub mod family;
pub mod hadamard;
pub mod harness;
pub mod mp;
pub mod series;
pub mod special;
pub mod zeros;

pub use mp::{Complex, Prec, Real};
