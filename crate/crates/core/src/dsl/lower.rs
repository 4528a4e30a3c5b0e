use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::ast::{Expr, Interpreter, Pos};
use super::DslError;
use crate::kernel::{Form, Var};
use crate::scalar::Scalar;
use crate::RationalForm;

/// Names visible to the lowering: phase variables, `r`, the declared
/// parameters, and any named definitions.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    params: Vec<Var>,
    defs: BTreeMap<String, RationalForm>,
}

impl Scope {
    pub fn new(params: &[Var]) -> Self {
        Scope { params: params.to_vec(), defs: BTreeMap::new() }
    }

    /// Scope with all four parameters declared.
    pub fn all_params() -> Self {
        Self::new(&Var::PARAMS)
    }

    pub fn define(&mut self, name: impl Into<String>, value: RationalForm) {
        self.defs.insert(name.into(), value);
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn get(&self, name: &str) -> Option<RationalForm> {
        if let Some(f) = self.defs.get(name) {
            return Some(f.clone());
        }
        let v = Var::from_name(name)?;
        if v.is_param() && !self.params.contains(&v) {
            return None;
        }
        Some(Form::var(v))
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.get(name).is_some()
    }
}

/// Lowers expressions to canonical forms, memoizing bracket subterms.
pub struct FormLowering<'a> {
    scope: &'a Scope,
    cache: Mutex<HashMap<String, Arc<RationalForm>>>,
}

impl<'a> FormLowering<'a> {
    pub fn new(scope: &'a Scope) -> Self {
        FormLowering { scope, cache: Mutex::new(HashMap::new()) }
    }

    pub fn lower(&self, e: &Expr) -> Result<RationalForm, DslError> {
        e.interpret(self)
    }
}

impl Interpreter for FormLowering<'_> {
    type Value = RationalForm;

    fn number(&self, n: &Scalar, _pos: Pos) -> Result<RationalForm, DslError> {
        Ok(Form::constant(n.clone()))
    }

    fn symbol(&self, name: &str, pos: Pos) -> Result<RationalForm, DslError> {
        self.scope.get(name).ok_or_else(|| DslError::UnknownSymbol { name: name.to_string(), pos })
    }

    fn add(&self, a: RationalForm, b: RationalForm) -> RationalForm {
        a.add(&b)
    }

    fn sub(&self, a: RationalForm, b: RationalForm) -> RationalForm {
        a.sub(&b)
    }

    fn mul(&self, a: RationalForm, b: RationalForm) -> RationalForm {
        a.mul(&b)
    }

    fn neg(&self, a: RationalForm) -> RationalForm {
        a.neg()
    }

    fn div(&self, a: RationalForm, b: RationalForm, pos: Pos) -> Result<RationalForm, DslError> {
        a.div(&b).map_err(|_| DslError::NonInvertibleDivisor { pos })
    }

    fn pow(&self, a: RationalForm, n: i64, pos: Pos) -> Result<RationalForm, DslError> {
        let e = u32::try_from(n.unsigned_abs())
            .map_err(|_| DslError::Syntax { pos, msg: "exponent too large".into() })?;
        let base = if n < 0 { a.inverse().map_err(|_| DslError::NonInvertibleDivisor { pos })? } else { a };
        Ok(base.pow(e))
    }

    fn sqrt(&self, a: RationalForm, pos: Pos) -> Result<RationalForm, DslError> {
        if a == Form::s() {
            Ok(Form::var(Var::R))
        } else {
            Err(DslError::InvalidRadical { pos })
        }
    }

    fn bracket(&self, a: RationalForm, b: RationalForm, _pos: Pos) -> Result<RationalForm, DslError> {
        Ok(a.poisson_bracket(&b))
    }

    fn cached(&self, e: &Expr) -> Option<RationalForm> {
        let key = e.to_string();
        self.cache.lock().unwrap().get(&key).map(|f| (**f).clone())
    }

    fn store(&self, e: &Expr, v: &RationalForm) {
        self.cache.lock().unwrap().insert(e.to_string(), Arc::new(v.clone()));
    }
}

/// Lowers an expression over the phase variables, `r`, and `params`.
pub fn lower(e: &Expr, params: &[Var]) -> Result<RationalForm, DslError> {
    let scope = Scope::new(params);
    FormLowering::new(&scope).lower(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::kernel::Denominator;

    fn low(text: &str) -> Result<RationalForm, DslError> {
        lower(&parse(text).unwrap(), &Var::PARAMS)
    }

    #[test]
    fn sqrt_of_s_is_the_radical() {
        assert_eq!(low("sqrt(x^2+y^2+z^2)").unwrap(), Form::var(Var::R));
        assert_eq!(low("sqrt(z^2+x^2+y^2)").unwrap(), Form::var(Var::R));
        assert!(matches!(low("sqrt(x)"), Err(DslError::InvalidRadical { .. })));
    }

    #[test]
    fn division_by_s() {
        let f = low("1/(x^2+y^2+z^2)").unwrap();
        assert_eq!(f.denominator(), Denominator { s: 1, ..Denominator::ONE });
        assert!(f.mul(&Form::s()).is_one());
    }

    #[test]
    fn rejects_non_invertible_divisors() {
        for bad in ["1/(x+y)", "1/px", "1/k", "x/(1 + x^2)", "1/0"] {
            assert!(matches!(low(bad), Err(DslError::NonInvertibleDivisor { .. })), "{bad}");
        }
        assert!(low("1/(2*x^2*r*(x^2+y^2+z^2))").is_ok());
    }

    #[test]
    fn unknown_symbols_carry_positions() {
        match low("x + m") {
            Err(DslError::UnknownSymbol { name, pos }) => {
                assert_eq!(name, "m");
                assert_eq!(pos, Pos { line: 1, col: 5 });
            }
            other => panic!("unexpected {other:?}"),
        }
        let e = parse("k3").unwrap();
        assert!(lower(&e, &[Var::K]).is_err());
    }
}
