//! Two integer gradings preserved by the bracket.
//!
//! Scaling `p -> t p` together with `k, k1, k2, k3 -> t^2 (...)` and scaling
//! `q -> t q` together with `k -> t k`, `ki -> t^2 ki` are both conformal
//! symmetries of the Hamiltonian. Every printed function is homogeneous for
//! both, and a bracket of weights `w` and `w'` has weight `w + w' - (1, 1)`.
//! Restricting an ansatz to elements of the target's weight removes most of
//! the basis without changing the answer.

use std::ops::{Add, Mul, Sub};

use crate::kernel::{Denominator, ExponentVector, Var};
use crate::RationalForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Grade(pub i32, pub i32);

impl Grade {
    /// Weight change caused by one Poisson bracket.
    pub const BRACKET: Grade = Grade(-1, -1);

    pub fn of_var(v: Var) -> Grade {
        match v {
            Var::Px | Var::Py | Var::Pz => Grade(1, 0),
            Var::X | Var::Y | Var::Z | Var::R => Grade(0, 1),
            Var::K => Grade(2, 1),
            Var::K1 | Var::K2 | Var::K3 => Grade(2, 2),
        }
    }

    pub fn of_monomial(e: &ExponentVector) -> Grade {
        Var::ALL.iter().fold(Grade::default(), |g, &v| g + Grade::of_var(v) * i32::from(e.get(v)))
    }

    pub fn of_denominator(d: &Denominator) -> Grade {
        Grade(0, i32::from(d.x) + i32::from(d.y) + i32::from(d.z) + 2 * i32::from(d.s))
    }

    /// Weight of a form, `None` when it is not homogeneous (or is zero).
    pub fn of_form(f: &RationalForm) -> Option<Grade> {
        let den = Grade::of_denominator(&f.denominator());
        let mut terms = f.numerator().terms().iter().map(|(e, _)| Grade::of_monomial(e));
        let first = terms.next()?;
        terms.all(|g| g == first).then_some(first - den)
    }
}

impl Add for Grade {
    type Output = Grade;
    fn add(self, o: Grade) -> Grade {
        Grade(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Grade {
    type Output = Grade;
    fn sub(self, o: Grade) -> Grade {
        Grade(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<i32> for Grade {
    type Output = Grade;
    fn mul(self, n: i32) -> Grade {
        Grade(self.0 * n, self.1 * n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{builtin, NONDEGENERATE};

    #[test]
    fn catalog_functions_are_bihomogeneous() {
        let sys = builtin(NONDEGENERATE).unwrap();
        let g = |n: &str| Grade::of_form(sys.lookup(n).unwrap());
        assert_eq!(g("H"), Some(Grade(2, 0)));
        for n in ["A1", "A2", "B2"] {
            assert_eq!(g(n), Some(Grade(2, 2)), "{n}");
        }
        for n in ["B1", "F"] {
            assert_eq!(g(n), Some(Grade(4, 2)), "{n}");
        }
    }

    #[test]
    fn bracket_shifts_weight() {
        let sys = builtin(NONDEGENERATE).unwrap();
        let a1 = sys.lookup("A1").unwrap();
        let b1 = sys.lookup("B1").unwrap();
        let c = a1.poisson_bracket(b1);
        assert_eq!(Grade::of_form(&c), Some(Grade(2, 2) + Grade(4, 2) + Grade::BRACKET));
        let mixed = RationalForm::var(Var::X).add(&RationalForm::var(Var::Px));
        assert_eq!(Grade::of_form(&mixed), None);
    }
}
