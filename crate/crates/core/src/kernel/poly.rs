use rustc_hash::FxHashMap;

use super::var::{ExponentVector, Var};
use crate::scalar::Coeff;

/// Sparse polynomial in the eleven kernel symbols, with the radical reduced
/// through `r^2 -> x^2 + y^2 + z^2`.
///
/// Terms are kept sorted in descending graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<C> {
    terms: Vec<(ExponentVector, C)>,
}

pub(crate) type TermMap<C> = FxHashMap<ExponentVector, C>;

#[inline]
pub(crate) fn accumulate<C: Coeff>(map: &mut TermMap<C>, e: ExponentVector, c: C) {
    use std::collections::hash_map::Entry;
    match map.entry(e) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
    }
}

/// Adds `c * e` to `map`, replacing `r^2` by `x^2 + y^2 + z^2` when needed.
#[inline]
pub(crate) fn accumulate_reduced<C: Coeff>(map: &mut TermMap<C>, mut e: ExponentVector, c: C) {
    let r = e.get(Var::R);
    if r < 2 {
        accumulate(map, e, c);
        return;
    }
    e.set(Var::R, r - 2);
    for v in [Var::X, Var::Y, Var::Z] {
        let mut t = e;
        t.set(v, e.get(v) + 2);
        accumulate_reduced(map, t, c.clone());
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(ExponentVector::ONE, c)
    }

    pub fn monomial(e: ExponentVector, c: C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut map = TermMap::default();
        accumulate_reduced(&mut map, e, c);
        Self::from_map(map)
    }

    /// `x^2 + y^2 + z^2`.
    pub fn s() -> Self {
        let mut map = TermMap::default();
        for v in [Var::X, Var::Y, Var::Z] {
            map.insert(ExponentVector::of(v, 2), C::one());
        }
        Self::from_map(map)
    }

    pub(crate) fn from_map(map: TermMap<C>) -> Self {
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Poly { terms }
    }

    /// Builds a polynomial from terms that may repeat or carry `r^2`.
    pub fn from_terms<I: IntoIterator<Item = (ExponentVector, C)>>(terms: I) -> Self {
        let mut map = TermMap::default();
        for (e, c) in terms {
            accumulate_reduced(&mut map, e, c);
        }
        Self::from_map(map)
    }

    pub fn terms(&self) -> &[(ExponentVector, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(ExponentVector, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        use std::cmp::Ordering::*;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let take_b = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Less => {
                    out.push((b[j].0, take_b(&b[j].1)));
                    j += 1;
                }
                Equal => {
                    let c = if negate { a[i].1.clone() - &b[j].1 } else { a[i].1.clone() + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(e, c)| (*e, take_b(c))));
        Poly { terms: out }
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, c.clone() * k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut map = TermMap::default();
        map.reserve(self.len().saturating_mul(other.len()).min(1 << 20));
        self.mul_into(other, &C::one(), &mut map);
        Self::from_map(map)
    }

    pub(crate) fn mul_into(&self, other: &Self, factor: &C, map: &mut TermMap<C>) {
        for (ea, ca) in &self.terms {
            let ca = ca.clone() * factor;
            for (eb, cb) in &other.terms {
                accumulate_reduced(map, ea.mul(eb), ca.clone() * cb);
            }
        }
    }

    pub(crate) fn add_into(&self, factor: &C, map: &mut TermMap<C>) {
        for (e, c) in &self.terms {
            accumulate(map, *e, c.clone() * factor);
        }
    }

    /// Multiplies by a monomial that carries no radical.
    pub fn mul_monomial(&self, m: &ExponentVector) -> Self {
        debug_assert_eq!(m.get(Var::R), 0);
        // a monomial order is compatible with multiplication, so order is kept
        Poly { terms: self.terms.iter().map(|(e, c)| (e.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(C::one());
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

    /// Smallest exponent of `v` over all terms (0 for the zero polynomial).
    pub fn min_exp(&self, v: Var) -> u8 {
        self.terms.iter().map(|(e, _)| e.get(v)).min().unwrap_or(0)
    }

    pub fn max_exp(&self, v: Var) -> u8 {
        self.terms.iter().map(|(e, _)| e.get(v)).max().unwrap_or(0)
    }

    /// Divides every term by `v^n`; the caller guarantees divisibility.
    pub fn shift_down(&self, v: Var, n: u8) -> Self {
        let m = ExponentVector::of(v, n);
        Poly {
            terms: self.terms.iter().map(|(e, c)| (e.div(&m).expect("not divisible"), c.clone())).collect(),
        }
    }

    /// Exact quotient by `s = x^2 + y^2 + z^2`, or `None` when `s` does not divide.
    ///
    /// Division is carried out with `z` as the main variable (`s` is monic of
    /// degree two in `z`); the remainder has `z`-degree at most one.
    pub fn div_s(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut work: TermMap<C> = self.terms.iter().cloned().collect();
        let mut quotient = TermMap::default();
        loop {
            let top = work.keys().map(|e| e.get(Var::Z)).max().unwrap_or(0);
            if top < 2 {
                break;
            }
            let lead: Vec<_> = work
                .iter()
                .filter(|(e, _)| e.get(Var::Z) == top)
                .map(|(e, c)| (*e, c.clone()))
                .collect();
            for (e, c) in lead {
                work.remove(&e);
                let mut m = e;
                m.set(Var::Z, top - 2);
                for v in [Var::X, Var::Y] {
                    let mut t = m;
                    t.set(v, m.get(v) + 2);
                    accumulate(&mut work, t, -c.clone());
                }
                accumulate(&mut quotient, m, c);
            }
        }
        if work.is_empty() {
            Some(Self::from_map(quotient))
        } else {
            None
        }
    }

    /// Partial derivative treating `r` as an independent symbol.
    pub fn formal_derivative(&self, v: Var) -> Self {
        let mut map = TermMap::default();
        for (e, c) in &self.terms {
            let k = e.get(v);
            if k == 0 {
                continue;
            }
            let mut t = *e;
            t.set(v, k - 1);
            accumulate(&mut map, t, c.clone() * C::from_u8(k).expect("small int"));
        }
        Self::from_map(map)
    }

    /// Terms carrying the radical.
    pub fn radical_part(&self) -> Self {
        Poly { terms: self.terms.iter().filter(|(e, _)| e.get(Var::R) > 0).cloned().collect() }
    }

    pub fn momentum_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.momentum_degree()).max()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut map = TermMap::default();
        for (e, c) in &self.terms {
            accumulate(&mut map, *e, f(c));
        }
        Poly::from_map(map)
    }

    /// Rebuilds the polynomial by mapping each term to a new (monomial, coefficient).
    pub fn map_terms(&self, f: impl Fn(&ExponentVector, &C) -> (ExponentVector, C)) -> Self {
        let mut map = TermMap::default();
        for (e, c) in &self.terms {
            let (e2, c2) = f(e, c);
            accumulate_reduced(&mut map, e2, c2);
        }
        Self::from_map(map)
    }
}
