pub mod dsl;
pub mod fitter;
pub mod genpoly;
pub mod kernel;
pub mod linalg;
pub mod numeric;
pub mod scalar;
pub mod system;
pub mod verifier;

pub use scalar::Scalar;

/// Canonical exact expression over the rationals.
pub type RationalForm = kernel::Form<Scalar>;
/// Same representation with `f64` coefficients, for fast numeric evaluation.
pub type FloatForm = kernel::Form<f64>;
