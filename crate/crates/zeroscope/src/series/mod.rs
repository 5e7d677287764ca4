//! Coefficient streams, factorial weighting, radius/order estimation, and
//! certified truncated evaluation of Σ cₙ zⁿ.

mod evaluate;
mod file;
mod radius;
mod stream;

pub use evaluate::{
    evaluate, growth_bound_check, make_tail_certificate, make_tail_certificate_with,
    CertificateError, EvalError, EvalResult, GrowthCheck, TailCertificate,
};
pub use file::{precision_from_env, read_coefficient_file, write_coefficient_file, FileError};
pub use radius::{
    order_estimate, radius_of_convergence, GrowthProfile, OrderError, RadiusClass, RadiusError,
};
pub use stream::{
    factorial, is_nonterminating_up_to, log2_factorial_f64, CoeffSource, CoefficientStream,
    TerminationStatus,
};
