use std::cmp::Ordering;
use std::fmt;

/// Number of symbols tracked by an [`ExponentVector`].
pub const NVARS: usize = 11;

/// The fixed symbol set of the kernel, listed in rendering priority order.
///
/// Positions carry the Laurent part of a [`Form`](super::Form); `R` is the
/// radical `sqrt(x^2+y^2+z^2)`; `K..K3` are the potential parameters, which
/// are never inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Px = 0,
    Py = 1,
    Pz = 2,
    X = 3,
    Y = 4,
    Z = 5,
    R = 6,
    K = 7,
    K1 = 8,
    K2 = 9,
    K3 = 10,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::Px,
        Var::Py,
        Var::Pz,
        Var::X,
        Var::Y,
        Var::Z,
        Var::R,
        Var::K,
        Var::K1,
        Var::K2,
        Var::K3,
    ];

    pub const PARAMS: [Var; 4] = [Var::K, Var::K1, Var::K2, Var::K3];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Px => "px",
            Var::Py => "py",
            Var::Pz => "pz",
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::R => "r",
            Var::K => "k",
            Var::K1 => "k1",
            Var::K2 => "k2",
            Var::K3 => "k3",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }

    pub fn is_param(self) -> bool {
        matches!(self, Var::K | Var::K1 | Var::K2 | Var::K3)
    }

    pub fn is_momentum(self) -> bool {
        matches!(self, Var::Px | Var::Py | Var::Pz)
    }

    pub fn is_position(self) -> bool {
        matches!(self, Var::X | Var::Y | Var::Z)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A canonical coordinate, i.e. a variable Hamilton's equations act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhaseVar {
    X,
    Y,
    Z,
    Px,
    Py,
    Pz,
}

impl PhaseVar {
    pub const ALL: [PhaseVar; 6] =
        [PhaseVar::X, PhaseVar::Y, PhaseVar::Z, PhaseVar::Px, PhaseVar::Py, PhaseVar::Pz];

    /// `(position, conjugate momentum)` pairs.
    pub const PAIRS: [(PhaseVar, PhaseVar); 3] =
        [(PhaseVar::X, PhaseVar::Px), (PhaseVar::Y, PhaseVar::Py), (PhaseVar::Z, PhaseVar::Pz)];

    pub fn var(self) -> Var {
        match self {
            PhaseVar::X => Var::X,
            PhaseVar::Y => Var::Y,
            PhaseVar::Z => Var::Z,
            PhaseVar::Px => Var::Px,
            PhaseVar::Py => Var::Py,
            PhaseVar::Pz => Var::Pz,
        }
    }

    pub fn from_name(name: &str) -> Option<PhaseVar> {
        PhaseVar::ALL.iter().copied().find(|p| p.var().name() == name)
    }

    /// Slot in a `[x, y, z, px, py, pz]` state vector.
    pub fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PhaseVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.var().name())
    }
}

/// Exponents of one numerator monomial.
///
/// Position exponents here are non-negative; negative powers of x, y, z live in
/// the [`Denominator`](super::Denominator) of the enclosing form. The radical
/// exponent is 0 or 1 once a product has been reduced.
///
/// Ordering is graded lexicographic over (px, py, pz, x, y, z, r, k, k1, k2, k3).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector([u8; NVARS]);

impl ExponentVector {
    pub const ONE: ExponentVector = ExponentVector([0; NVARS]);

    pub fn new(exps: [u8; NVARS]) -> Self {
        ExponentVector(exps)
    }

    pub fn of(var: Var, exp: u8) -> Self {
        let mut e = [0; NVARS];
        e[var.index()] = exp;
        ExponentVector(e)
    }

    #[inline]
    pub fn get(&self, var: Var) -> u8 {
        self.0[var.index()]
    }

    #[inline]
    pub fn set(&mut self, var: Var, exp: u8) {
        self.0[var.index()] = exp;
    }

    pub fn exponents(&self) -> &[u8; NVARS] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn momentum_degree(&self) -> u32 {
        u32::from(self.get(Var::Px)) + u32::from(self.get(Var::Py)) + u32::from(self.get(Var::Pz))
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Exponent-wise sum; panics on `u8` overflow.
    #[inline]
    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        let mut out = [0u8; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        ExponentVector(out)
    }

    /// Exponent-wise difference; `None` if `other` does not divide `self`.
    pub fn div(&self, other: &ExponentVector) -> Option<ExponentVector> {
        let mut out = [0u8; NVARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].checked_sub(other.0[i])?;
        }
        Some(ExponentVector(out))
    }

    /// Same monomial with the parameter exponents cleared.
    pub fn phase_part(&self) -> ExponentVector {
        let mut e = *self;
        for p in Var::PARAMS {
            e.set(p, 0);
        }
        e
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.get(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}
