//! Exact arithmetic over `Q[k,k1,k2,k3][x,y,z,px,py,pz,r]/(r^2 - x^2 - y^2 - z^2)`
//! with `x`, `y`, `z` and `x^2 + y^2 + z^2` invertible.

mod eval;
mod form;
mod poly;
mod render;
mod var;

use thiserror::Error;

pub use eval::Valuation;
pub use form::{Denominator, Form};
pub use poly::Poly;
pub use render::{render_monomial, render_terms};
pub use var::{ExponentVector, PhaseVar, Var, NVARS};


#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("divisor is not a single invertible term")]
    NonInvertible,
    #[error("momentum degree of the zero expression is undefined")]
    UndefinedDegree,
    #[error("radical value does not satisfy r^2 = x^2 + y^2 + z^2")]
    InconsistentRadical,
    #[error("a denominator factor vanishes at the evaluation point")]
    DivisionByZeroAtPoint,
    #[error("no value assigned to `{0}`")]
    MissingValue(Var),
}
