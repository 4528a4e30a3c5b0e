//! Expression language for phase-space functions, generator polynomials and
//! bracket words.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := base ('^' ['-'] int)?
//! base   := number | symbol | '(' expr ')' | 'sqrt' '(' expr ')' | '{' expr ',' expr '}'
//! ```
//!
//! `{f, g}` is the canonical Poisson bracket. `r` is reserved for
//! `sqrt(x^2+y^2+z^2)`.

mod ast;
mod lower;
mod parser;

use thiserror::Error;

pub use ast::{BinOp, Expr, ExprKind, Interpreter, Pos};
pub use lower::{lower, FormLowering, Scope};
pub use parser::parse;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { name: String, pos: Pos },
    #[error("divisor at {pos} is not a single invertible term")]
    NonInvertibleDivisor { pos: Pos },
    #[error("sqrt at {pos} is only defined for x^2+y^2+z^2")]
    InvalidRadical { pos: Pos },
    #[error("{what} is not supported here ({pos})")]
    Unsupported { what: String, pos: Pos },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::UnknownSymbol { pos, .. }
            | DslError::NonInvertibleDivisor { pos }
            | DslError::InvalidRadical { pos }
            | DslError::Unsupported { pos, .. } => *pos,
        }
    }

    /// Same error relocated to `line` (for errors raised while parsing one
    /// line of a larger file).
    pub fn at_line(self, line: u32) -> Self {
        let shift = |p: Pos| Pos { line, col: p.col };
        match self {
            DslError::Syntax { pos, msg } => DslError::Syntax { pos: shift(pos), msg },
            DslError::UnknownSymbol { name, pos } => DslError::UnknownSymbol { name, pos: shift(pos) },
            DslError::NonInvertibleDivisor { pos } => DslError::NonInvertibleDivisor { pos: shift(pos) },
            DslError::InvalidRadical { pos } => DslError::InvalidRadical { pos: shift(pos) },
            DslError::Unsupported { what, pos } => DslError::Unsupported { what, pos: shift(pos) },
        }
    }
}
