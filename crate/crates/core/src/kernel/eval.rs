use num_traits::Zero;

use super::form::Form;
use super::var::{Var, NVARS};
use super::KernelError;
use crate::scalar::Scalar;

/// Values for all eleven kernel symbols, the radical included.
#[derive(Clone, Debug, PartialEq)]
pub struct Valuation<T> {
    values: [T; NVARS],
}

impl<T: Clone> Valuation<T> {
    pub fn new(values: [T; NVARS]) -> Self {
        Valuation { values }
    }

    /// Builds a valuation from `(symbol, value)` pairs; every symbol must be present.
    pub fn from_pairs<I: IntoIterator<Item = (Var, T)>>(pairs: I) -> Result<Self, KernelError> {
        let mut slots: [Option<T>; NVARS] = Default::default();
        for (v, t) in pairs {
            slots[v.index()] = Some(t);
        }
        let mut values = Vec::with_capacity(NVARS);
        for v in Var::ALL {
            values.push(slots[v.index()].take().ok_or(KernelError::MissingValue(v))?);
        }
        Ok(Valuation { values: values.try_into().ok().expect("length checked") })
    }

    pub fn get(&self, v: Var) -> &T {
        &self.values[v.index()]
    }

    pub fn set(&mut self, v: Var, t: T) {
        self.values[v.index()] = t;
    }

    pub fn values(&self) -> &[T; NVARS] {
        &self.values
    }
}

impl Valuation<Scalar> {
    /// Checks `r^2 = x^2 + y^2 + z^2` exactly.
    pub fn check_radical(&self) -> Result<(), KernelError> {
        let sq = |v: Var| self.get(v) * self.get(v);
        if sq(Var::R) == sq(Var::X) + sq(Var::Y) + sq(Var::Z) {
            Ok(())
        } else {
            Err(KernelError::InconsistentRadical)
        }
    }
}

impl Form<Scalar> {
    /// Exact evaluation at a rational point with a rational radical value.
    pub fn eval_rational(&self, point: &Valuation<Scalar>) -> Result<Scalar, KernelError> {
        point.check_radical()?;
        for v in [Var::X, Var::Y, Var::Z] {
            if self.denominator().get(v) > 0 && point.get(v).is_zero() {
                return Err(KernelError::DivisionByZeroAtPoint);
            }
        }
        self.eval_with(point.values(), Clone::clone).ok_or(KernelError::DivisionByZeroAtPoint)
    }
}
