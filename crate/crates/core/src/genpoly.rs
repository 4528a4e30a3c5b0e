//! Polynomials in named generators (A1, B1, H, ...) and parameters with exact
//! rational coefficients. These are the right-hand sides of relations and the
//! fitted structure functions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::dsl::{parse, DslError, Expr, Interpreter, Pos};
use crate::kernel::{render_terms, Var};
use crate::{RationalForm, Scalar};

/// Rendering and ordering priority of known symbols.
const RANKED: [&str; 13] = ["A1", "A2", "B1", "B2", "F", "H", "C1", "C2", "D", "k", "k1", "k2", "k3"];

fn rank(name: &str) -> (usize, &str) {
    match RANKED.iter().position(|r| *r == name) {
        // unknown symbols sort between the generators and the parameters
        Some(i) if i >= 9 => (i + 1, ""),
        Some(i) => (i, ""),
        None => (9, name),
    }
}

fn symbol_cmp(a: &str, b: &str) -> Ordering {
    rank(a).cmp(&rank(b))
}

/// Product of named symbols with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GenMonomial(Vec<(String, u32)>);

impl GenMonomial {
    pub fn one() -> Self {
        GenMonomial(Vec::new())
    }

    pub fn symbol(name: &str) -> Self {
        GenMonomial(vec![(name.to_string(), 1)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, u32)>>(pairs: I) -> Self {
        let mut m = GenMonomial::one();
        for (s, e) in pairs {
            if e > 0 {
                m = m.mul(&GenMonomial(vec![(s, e)]));
            }
        }
        m
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.iter().find(|(s, _)| s == name).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Total degree counting only the listed symbols.
    pub fn degree_in(&self, names: &[&str]) -> u32 {
        self.0.iter().filter(|(s, _)| names.contains(&s.as_str())).map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &GenMonomial) -> GenMonomial {
        let mut out: Vec<(String, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ord = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => symbol_cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        GenMonomial(out)
    }

    /// Drops one power of `name`; `None` if absent.
    pub fn reduce(&self, name: &str) -> Option<GenMonomial> {
        let idx = self.0.iter().position(|(s, _)| s == name)?;
        let mut out = self.clone();
        if out.0[idx].1 == 1 {
            out.0.remove(idx);
        } else {
            out.0[idx].1 -= 1;
        }
        Some(out)
    }

    /// Splits into the part over `names` and the rest.
    pub fn split(&self, names: &[&str]) -> (GenMonomial, GenMonomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(s, _)| names.contains(&s.as_str()));
        (GenMonomial(a), GenMonomial(b))
    }

    /// Factors as printed: parameters first, then generators in rank order.
    pub fn render_factors(&self) -> Vec<String> {
        let is_param = |s: &str| Var::from_name(s).is_some_and(|v| v.is_param());
        let params = self.0.iter().filter(|(s, _)| is_param(s));
        let rest = self.0.iter().filter(|(s, _)| !is_param(s));
        params
            .chain(rest)
            .map(|(s, e)| if *e == 1 { s.clone() } else { format!("{s}^{e}") })
            .collect()
    }
}

/// Lexicographic on exponents in rank order; larger exponents first when
/// sorting in descending order.
impl Ord for GenMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(a), Some(b)) => match symbol_cmp(&a.0, &b.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if a.1 != b.1 {
                            return a.1.cmp(&b.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for GenMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GenMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            f.write_str(&self.render_factors().join("*"))
        }
    }
}

/// Sparse polynomial over named symbols.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GenPoly {
    terms: BTreeMap<GenMonomial, Scalar>,
}

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(GenMonomial::one(), c)
    }

    pub fn symbol(name: &str) -> Self {
        Self::term(GenMonomial::symbol(name), Scalar::one())
    }

    pub fn term(m: GenMonomial, c: Scalar) -> Self {
        let mut p = GenPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: GenMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending order.
    pub fn terms(&self) -> impl Iterator<Item = (&GenMonomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &GenMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, o: &GenPoly) -> GenPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &GenPoly) -> GenPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GenPoly {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, k: &Scalar) -> GenPoly {
        let mut out = GenPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, o: &GenPoly) -> GenPoly {
        let mut out = GenPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> GenPoly {
        (0..n).fold(GenPoly::constant(Scalar::one()), |acc, _| acc.mul(self))
    }

    /// Formal partial derivative.
    pub fn derivative(&self, name: &str) -> GenPoly {
        let mut out = GenPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(name);
            if e == 0 {
                continue;
            }
            out.add_term(m.reduce(name).unwrap(), c * Scalar::from_integer(e.into()));
        }
        out
    }

    /// Maximum total degree over `names`.
    pub fn degree_in(&self, names: &[&str]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(names)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for m in self.terms.keys() {
            for (s, _) in m.factors() {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out.sort_by(|a, b| symbol_cmp(a, b));
        out
    }

    /// Replaces every non-parameter symbol through `resolve` and expands.
    pub fn substitute<F>(&self, resolve: F) -> Result<RationalForm, String>
    where
        F: Fn(&str) -> Option<RationalForm>,
    {
        let mut cache: HashMap<(String, u32), RationalForm> = HashMap::new();
        let mut products = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut acc = RationalForm::constant(c.clone());
            for (s, e) in m.factors() {
                let key = (s.clone(), *e);
                if !cache.contains_key(&key) {
                    let base = match Var::from_name(s) {
                        Some(v) if v.is_param() => RationalForm::var(v),
                        _ => resolve(s).ok_or_else(|| format!("unknown symbol `{s}`"))?,
                    };
                    cache.insert(key.clone(), base.pow(*e));
                }
                acc = acc.mul(&cache[&key]);
            }
            products.push(acc);
        }
        Ok(RationalForm::sum(products.iter()))
    }

    /// Parses a polynomial; division is allowed by nonzero constants only.
    pub fn parse(text: &str) -> Result<GenPoly, DslError> {
        Self::from_expr(&parse(text)?)
    }

    pub fn from_expr(e: &Expr) -> Result<GenPoly, DslError> {
        e.interpret(&GenLowering)
    }
}

struct GenLowering;

impl Interpreter for GenLowering {
    type Value = GenPoly;

    fn number(&self, n: &Scalar, _pos: Pos) -> Result<GenPoly, DslError> {
        Ok(GenPoly::constant(n.clone()))
    }

    fn symbol(&self, name: &str, _pos: Pos) -> Result<GenPoly, DslError> {
        Ok(GenPoly::symbol(name))
    }

    fn add(&self, a: GenPoly, b: GenPoly) -> GenPoly {
        GenPoly::add(&a, &b)
    }

    fn sub(&self, a: GenPoly, b: GenPoly) -> GenPoly {
        GenPoly::sub(&a, &b)
    }

    fn mul(&self, a: GenPoly, b: GenPoly) -> GenPoly {
        GenPoly::mul(&a, &b)
    }

    fn neg(&self, a: GenPoly) -> GenPoly {
        GenPoly::neg(&a)
    }

    fn div(&self, a: GenPoly, b: GenPoly, pos: Pos) -> Result<GenPoly, DslError> {
        match b.terms.iter().next() {
            Some((m, c)) if b.len() == 1 && m.is_one() => Ok(a.scale(&(Scalar::one() / c))),
            _ => Err(DslError::NonInvertibleDivisor { pos }),
        }
    }

    fn pow(&self, a: GenPoly, n: i64, pos: Pos) -> Result<GenPoly, DslError> {
        let e = u32::try_from(n).map_err(|_| DslError::NonInvertibleDivisor { pos })?;
        Ok(a.pow(e))
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.terms().map(|(m, c)| (m.render_factors(), c.clone()))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn ordering_puts_a1_squared_first() {
        let p = GenPoly::parse("4*A2*B2*A1 - 4*k1*A1^2 + 8*k1*A2*A1 - 4*k2*k3^2").unwrap();
        assert!(p.to_string().starts_with("-4*k1*A1^2"), "{p}");
    }

    #[test]
    fn formal_derivative() {
        let p = GenPoly::parse("A1^3*B1 + 2*H*A1 - k").unwrap();
        assert_eq!(p.derivative("A1"), GenPoly::parse("3*A1^2*B1 + 2*H").unwrap());
        assert!(p.derivative("F").is_zero());
    }

    #[test]
    fn rendering_round_trips() {
        let p = GenPoly::parse("-16*H*A1^2 + 1/2*B1*k3 - 4*(A1 - F)^2 + h^2").unwrap();
        assert_eq!(GenPoly::parse(&p.to_string()).unwrap(), p);
        assert_eq!(p.coefficient(&GenMonomial::from_pairs([("A1".into(), 1), ("F".into(), 1)])), int(8));
    }

    #[test]
    fn division_only_by_constants() {
        assert!(GenPoly::parse("A1/2").is_ok());
        assert!(GenPoly::parse("A1/B1").is_err());
        assert!(GenPoly::parse("A1^-1").is_err());
    }
}
