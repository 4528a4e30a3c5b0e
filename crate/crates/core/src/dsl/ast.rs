use std::fmt;

use super::DslError;
use crate::scalar::Scalar;

/// 1-based source location.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(Scalar),
    Sym(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power; the exponent is a literal.
    Pow(Box<Expr>, i64),
    Sqrt(Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
}

/// Evaluation of an [`Expr`] in some target algebra.
pub trait Interpreter {
    type Value: Clone;

    fn number(&self, n: &Scalar, pos: Pos) -> Result<Self::Value, DslError>;
    fn symbol(&self, name: &str, pos: Pos) -> Result<Self::Value, DslError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn div(&self, a: Self::Value, b: Self::Value, pos: Pos) -> Result<Self::Value, DslError>;
    fn pow(&self, a: Self::Value, n: i64, pos: Pos) -> Result<Self::Value, DslError>;

    fn sqrt(&self, _a: Self::Value, pos: Pos) -> Result<Self::Value, DslError> {
        Err(DslError::Unsupported { what: "sqrt".into(), pos })
    }

    fn bracket(&self, _a: Self::Value, _b: Self::Value, pos: Pos) -> Result<Self::Value, DslError> {
        Err(DslError::Unsupported { what: "Poisson bracket".into(), pos })
    }

    /// Memoized value for a bracket node, if the interpreter keeps a cache.
    fn cached(&self, _e: &Expr) -> Option<Self::Value> {
        None
    }

    fn store(&self, _e: &Expr, _v: &Self::Value) {}
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }

    pub fn interpret<I: Interpreter>(&self, it: &I) -> Result<I::Value, DslError> {
        match &self.kind {
            ExprKind::Num(n) => it.number(n, self.pos),
            ExprKind::Sym(s) => it.symbol(s, self.pos),
            ExprKind::Neg(a) => Ok(it.neg(a.interpret(it)?)),
            ExprKind::Binary(op, a, b) => {
                let a = a.interpret(it)?;
                let b = b.interpret(it)?;
                match op {
                    BinOp::Add => Ok(it.add(a, b)),
                    BinOp::Sub => Ok(it.sub(a, b)),
                    BinOp::Mul => Ok(it.mul(a, b)),
                    BinOp::Div => it.div(a, b, self.pos),
                }
            }
            ExprKind::Pow(a, n) => it.pow(a.interpret(it)?, *n, self.pos),
            ExprKind::Sqrt(a) => it.sqrt(a.interpret(it)?, self.pos),
            ExprKind::Bracket(a, b) => {
                if let Some(v) = it.cached(self) {
                    return Ok(v);
                }
                let v = it.bracket(a.interpret(it)?, b.interpret(it)?, self.pos)?;
                it.store(self, &v);
                Ok(v)
            }
        }
    }

    /// Symbols referenced anywhere in the expression, in first-use order.
    pub fn symbols(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match &e.kind {
                ExprKind::Num(_) => {}
                ExprKind::Sym(s) => {
                    if !out.contains(s) {
                        out.push(s.clone());
                    }
                }
                ExprKind::Neg(a) | ExprKind::Pow(a, _) | ExprKind::Sqrt(a) => walk(a, out),
                ExprKind::Binary(_, a, b) | ExprKind::Bracket(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            ExprKind::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            ExprKind::Num(n) if !n.is_integer() => 2,
            ExprKind::Num(n) if n < &Scalar::from_integer(0.into()) => 3,
            _ => 5,
        }
    }
}

/// Fully determined text form; parsing it back yields an equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| -> fmt::Result {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match &self.kind {
            ExprKind::Num(n) => write!(f, "{n}"),
            ExprKind::Sym(s) => f.write_str(s),
            ExprKind::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, 3)
            }
            ExprKind::Binary(op, a, b) => {
                let (p, sym) = match op {
                    BinOp::Add => (1, " + "),
                    BinOp::Sub => (1, " - "),
                    BinOp::Mul => (2, "*"),
                    BinOp::Div => (2, "/"),
                };
                wrap(f, a, p)?;
                f.write_str(sym)?;
                wrap(f, b, p + 1)
            }
            ExprKind::Pow(a, n) => {
                wrap(f, a, 5)?;
                write!(f, "^{n}")
            }
            ExprKind::Sqrt(a) => write!(f, "sqrt({a})"),
            ExprKind::Bracket(a, b) => write!(f, "{{{a}, {b}}}"),
        }
    }
}
