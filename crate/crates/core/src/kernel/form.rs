use std::ops::{Add, Mul, Neg, Sub};

use super::poly::{Poly, TermMap};
use super::var::{ExponentVector, PhaseVar, Var};
use super::KernelError;
use crate::scalar::Coeff;

/// Exponents of the divisor `x^x * y^y * z^z * (x^2+y^2+z^2)^s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Denominator {
    pub x: u8,
    pub y: u8,
    pub z: u8,
    pub s: u8,
}

impl Denominator {
    pub const ONE: Denominator = Denominator { x: 0, y: 0, z: 0, s: 0 };

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    pub fn get(&self, v: Var) -> u8 {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
            Var::Z => self.z,
            _ => 0,
        }
    }

    fn get_mut(&mut self, v: Var) -> &mut u8 {
        match v {
            Var::X => &mut self.x,
            Var::Y => &mut self.y,
            Var::Z => &mut self.z,
            _ => unreachable!("only positions appear in denominators"),
        }
    }

    pub fn lcm(&self, o: &Denominator) -> Denominator {
        Denominator { x: self.x.max(o.x), y: self.y.max(o.y), z: self.z.max(o.z), s: self.s.max(o.s) }
    }

    pub fn product(&self, o: &Denominator) -> Denominator {
        Denominator { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z, s: self.s + o.s }
    }

    /// Monomial part of the divisor as an exponent vector.
    pub fn monomial(&self) -> ExponentVector {
        let mut e = ExponentVector::ONE;
        e.set(Var::X, self.x);
        e.set(Var::Y, self.y);
        e.set(Var::Z, self.z);
        e
    }

    /// The divisor written out as a polynomial.
    pub fn as_poly<C: Coeff>(&self) -> Poly<C> {
        Poly::<C>::s().pow(u32::from(self.s)).mul_monomial(&self.monomial())
    }
}

/// Canonical element of `Q[k,k1,k2,k3][x,y,z,px,py,pz,r]/(r^2 - s)` localized at
/// `x`, `y`, `z` and `s = x^2 + y^2 + z^2`.
///
/// A form is `numerator / (x^a y^b z^c s^d)` where the numerator shares no
/// factor `x` (resp. `y`, `z`, `s`) with a nontrivial part of the divisor.
/// Two forms are equal as functions iff they are structurally equal.
#[derive(Clone, PartialEq, Debug)]
pub struct Form<C> {
    num: Poly<C>,
    den: Denominator,
}

impl<C: Coeff> Form<C> {
    pub fn zero() -> Self {
        Form { num: Poly::zero(), den: Denominator::ONE }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Form { num: Poly::constant(c), den: Denominator::ONE }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n).expect("integer fits coefficient type"))
    }

    pub fn var(v: Var) -> Self {
        Form { num: Poly::monomial(ExponentVector::of(v, 1), C::one()), den: Denominator::ONE }
    }

    pub fn phase(v: PhaseVar) -> Self {
        Self::var(v.var())
    }

    /// `x^2 + y^2 + z^2`.
    pub fn s() -> Self {
        Form { num: Poly::s(), den: Denominator::ONE }
    }

    /// Builds `num / den` and brings it to canonical form.
    pub fn new(num: Poly<C>, den: Denominator) -> Self {
        Self::canonical(num, den)
    }

    pub fn from_poly(num: Poly<C>) -> Self {
        Form { num, den: Denominator::ONE }
    }

    pub fn numerator(&self) -> &Poly<C> {
        &self.num
    }

    pub fn denominator(&self) -> Denominator {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// Number of numerator terms.
    pub fn term_count(&self) -> usize {
        self.num.len()
    }

    /// The constant value if the form has no symbols at all.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_zero() {
            return Some(C::zero());
        }
        match self.num.terms() {
            [(e, c)] if e.is_one() && self.den.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn canonical(mut num: Poly<C>, mut den: Denominator) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        for v in [Var::X, Var::Y, Var::Z] {
            let d = den.get(v);
            if d == 0 {
                continue;
            }
            let m = num.min_exp(v).min(d);
            if m > 0 {
                num = num.shift_down(v, m);
                *den.get_mut(v) -= m;
            }
        }
        while den.s > 0 {
            match num.div_s() {
                Some(q) => {
                    num = q;
                    den.s -= 1;
                }
                None => break,
            }
        }
        Form { num, den }
    }

    /// Numerator rewritten over the (multiple) divisor `target`.
    fn lift(&self, target: &Denominator) -> Poly<C> {
        let m = Denominator {
            x: target.x - self.den.x,
            y: target.y - self.den.y,
            z: target.z - self.den.z,
            s: target.s - self.den.s,
        };
        let mut p = self.num.mul_monomial(&m.monomial());
        if m.s > 0 {
            p = p.mul(&Poly::s().pow(u32::from(m.s)));
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::canonical(self.num.add(&other.num), self.den);
        }
        let den = self.den.lcm(&other.den);
        Self::canonical(self.lift(&den).add(&other.lift(&den)), den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form { num: self.num.neg(), den: self.den }
    }

    pub fn scale(&self, k: &C) -> Self {
        Form { num: self.num.scale(k), den: if k.is_zero() { Denominator::ONE } else { self.den } }
    }

    /// Sum of many forms with a single canonicalization at the end.
    pub fn sum<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Form<C>>,
    {
        let items: Vec<&Form<C>> = items.into_iter().filter(|f| !f.is_zero()).collect();
        let den = items.iter().fold(Denominator::ONE, |d, f| d.lcm(&f.den));
        let mut map = TermMap::default();
        for f in items {
            f.lift(&den).add_into(&C::one(), &mut map);
        }
        Self::canonical(Poly::from_map(map), den)
    }

    /// Linear combination `sum c_i f_i`.
    pub fn linear_combination<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = (&'a C, &'a Form<C>)>,
    {
        let items: Vec<(&C, &Form<C>)> =
            items.into_iter().filter(|(c, f)| !c.is_zero() && !f.is_zero()).collect();
        let den = items.iter().fold(Denominator::ONE, |d, (_, f)| d.lcm(&f.den));
        let mut map = TermMap::default();
        for (c, f) in items {
            f.lift(&den).add_into(c, &mut map);
        }
        Self::canonical(Poly::from_map(map), den)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::canonical(self.num.mul(&other.num), self.den.product(&other.den))
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse, defined only for a single invertible term
    /// `c * x^a y^b z^c r^e * s^j` (no momenta, no parameters).
    pub fn inverse(&self) -> Result<Self, KernelError> {
        if self.is_zero() {
            return Err(KernelError::NonInvertible);
        }
        let mut n = self.num.clone();
        let mut j: u32 = 0;
        while let Some(q) = n.div_s() {
            n = q;
            j += 1;
        }
        let (e, c) = match n.terms() {
            [(e, c)] => (*e, c.clone()),
            _ => return Err(KernelError::NonInvertible),
        };
        if Var::ALL
            .iter()
            .any(|&v| (v.is_param() || v.is_momentum()) && e.get(v) != 0)
        {
            return Err(KernelError::NonInvertible);
        }
        let rexp = e.get(Var::R);
        // 1/r = r/s
        let mut top = self.den.as_poly::<C>();
        if rexp == 1 {
            top = top.mul(&Poly::monomial(ExponentVector::of(Var::R, 1), C::one()));
        }
        let total_s = j + u32::from(rexp);
        let den = Denominator {
            x: e.get(Var::X),
            y: e.get(Var::Y),
            z: e.get(Var::Z),
            s: u8::try_from(total_s).map_err(|_| KernelError::NonInvertible)?,
        };
        Ok(Self::canonical(top.scale(&(C::one() / c)), den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, KernelError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Un-normalized derivative; the result represents the derivative but may
    /// share factors between numerator and divisor.
    fn derivative_raw(&self, v: PhaseVar) -> (Poly<C>, Denominator) {
        let var = v.var();
        if var.is_momentum() {
            return (self.num.formal_derivative(var), self.den);
        }
        // d/dv (N / (v^a .. s^d)) = (v s N_v + v^2 N_r - N (a s + 2 d v^2)) / (v^(a+1) .. s^(d+1)),
        // where N_v treats r as a constant and N_r collects the terms carrying r
        // (dr/dv = v r / s).
        let a = self.den.get(var);
        let d = self.den.s;
        let vm = ExponentVector::of(var, 1);
        let v2 = ExponentVector::of(var, 2);
        let mut map = TermMap::default();
        let nv = self.num.formal_derivative(var);
        nv.mul_monomial(&vm).mul_into(&Poly::s(), &C::one(), &mut map);
        self.num.radical_part().mul_monomial(&v2).add_into(&C::one(), &mut map);
        if a > 0 {
            self.num.mul_into(&Poly::s(), &-C::from_u8(a).unwrap(), &mut map);
        }
        if d > 0 {
            let two_d = C::from_u32(2 * u32::from(d)).unwrap();
            self.num.mul_monomial(&v2).add_into(&-two_d, &mut map);
        }
        let mut den = self.den;
        *den.get_mut(var) += 1;
        den.s += 1;
        (Poly::from_map(map), den)
    }

    pub fn derivative(&self, v: PhaseVar) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (n, d) = self.derivative_raw(v);
        Self::canonical(n, d)
    }

    /// Canonical Poisson bracket `sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i)`.
    pub fn poisson_bracket(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // every product f_q g_p and f_p g_q has divisor den(f) den(g) q s;
        // lift them all to den(f) den(g) x y z s
        let mut den = self.den.product(&other.den);
        den.x += 1;
        den.y += 1;
        den.z += 1;
        den.s += 1;
        let mut map = TermMap::default();
        for (q, p) in PhaseVar::PAIRS {
            let others = {
                let mut e = ExponentVector::new([0; super::var::NVARS]);
                for w in [Var::X, Var::Y, Var::Z] {
                    if w != q.var() {
                        e.set(w, 1);
                    }
                }
                e
            };
            let fp = self.num.formal_derivative(p.var());
            let gp = other.num.formal_derivative(p.var());
            if !gp.is_zero() {
                let (fq, _) = self.derivative_raw(q);
                if !fq.is_zero() {
                    fq.mul_monomial(&others).mul_into(&gp, &C::one(), &mut map);
                }
            }
            if !fp.is_zero() {
                let (gq, _) = other.derivative_raw(q);
                if !gq.is_zero() {
                    fp.mul_monomial(&others).mul_into(&gq, &-C::one(), &mut map);
                }
            }
        }
        Self::canonical(Poly::from_map(map), den)
    }

    /// Highest total momentum degree over the numerator terms.
    pub fn momentum_degree(&self) -> Result<u32, KernelError> {
        self.num.momentum_degree().ok_or(KernelError::UndefinedDegree)
    }

    /// Replaces the symbol `v` (a parameter or momentum) by a constant.
    pub fn substitute(&self, v: Var, value: &C) -> Self {
        assert!(!v.is_position() && v != Var::R, "positions are substituted through evaluation");
        let num = self.num.map_terms(|e, c| {
            let k = e.get(v);
            let mut e2 = *e;
            e2.set(v, 0);
            (e2, c.clone() * num_traits::pow(value.clone(), usize::from(k)))
        });
        Self::canonical(num, self.den)
    }

    /// Evaluates at a point; `values` is indexed by [`Var::index`]. Returns
    /// `None` when the divisor vanishes. Consistency of the radical value is the
    /// caller's concern.
    pub fn eval_with<T, F>(&self, values: &[T; super::var::NVARS], conv: F) -> Option<T>
    where
        T: num_traits::Num + Clone,
        F: Fn(&C) -> T,
    {
        let maxes: Vec<u8> = Var::ALL.iter().map(|&v| self.num.max_exp(v)).collect();
        let powers: Vec<Vec<T>> = Var::ALL
            .iter()
            .map(|&v| {
                let mut ps = Vec::with_capacity(usize::from(maxes[v.index()]) + 1);
                ps.push(T::one());
                for i in 1..=usize::from(maxes[v.index()]) {
                    let next = ps[i - 1].clone() * values[v.index()].clone();
                    ps.push(next);
                }
                ps
            })
            .collect();
        let x = &values[Var::X.index()];
        let y = &values[Var::Y.index()];
        let z = &values[Var::Z.index()];
        let s = x.clone() * x.clone() + y.clone() * y.clone() + z.clone() * z.clone();
        let den = num_traits::pow(x.clone(), usize::from(self.den.x))
            * num_traits::pow(y.clone(), usize::from(self.den.y))
            * num_traits::pow(z.clone(), usize::from(self.den.z))
            * num_traits::pow(s, usize::from(self.den.s));
        if den.is_zero() {
            return None;
        }
        let mut acc = T::zero();
        for (e, c) in self.num.terms() {
            let mut t = conv(c);
            for v in Var::ALL {
                let k = e.get(v);
                if k > 0 {
                    t = t * powers[v.index()][usize::from(k)].clone();
                }
            }
            acc = acc + t;
        }
        Some(acc / den)
    }

    /// Converts coefficients, keeping the representation (no renormalization).
    pub fn convert<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        Form { num: self.num.map_coeffs(f), den: self.den }
    }

    /// Multiplies by a monomial in the parameters only; stays canonical.
    pub fn mul_param_monomial(&self, m: &ExponentVector) -> Self {
        debug_assert!(m.phase_part().is_one());
        Form { num: self.num.mul_monomial(m), den: self.den }
    }

    /// Whether any term mentions `v`.
    pub fn depends_on(&self, v: Var) -> bool {
        self.num.terms().iter().any(|(e, _)| e.get(v) > 0) || self.den.get(v) > 0
    }

    /// Numerator over the divisor `den`, which must be a multiple of this form's divisor.
    pub fn numerator_over(&self, den: &Denominator) -> Poly<C> {
        self.lift(den)
    }
}

impl<C: Coeff> Default for Form<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Add for &Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: Self) -> Form<C> {
        Form::add(self, rhs)
    }
}

impl<C: Coeff> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: Self) -> Form<C> {
        Form::sub(self, rhs)
    }
}

impl<C: Coeff> Mul for &Form<C> {
    type Output = Form<C>;
    fn mul(self, rhs: Self) -> Form<C> {
        Form::mul(self, rhs)
    }
}

impl<C: Coeff> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form::neg(self)
    }
}
