use rayon::prelude::*;
use serde::Serialize;

use super::VerifyError;
use crate::genpoly::GenPoly;
use crate::system::PhaseSystem;
use crate::RationalForm;

/// `C1 = {A1,B1}`, `C2 = {A2,B2}`, `D = {B1,B2}` and the generators.
pub struct DerivedBrackets {
    pub c1: RationalForm,
    pub c2: RationalForm,
    pub d: RationalForm,
}

impl DerivedBrackets {
    pub fn new(sys: &PhaseSystem) -> Result<Self, VerifyError> {
        let get = |n: &str| sys.lookup(n).ok_or_else(|| VerifyError::UnknownGenerator(n.to_string()));
        let (a1, a2, b1, b2) = (get("A1")?, get("A2")?, get("B1")?, get("B2")?);
        Ok(DerivedBrackets { c1: a1.poisson_bracket(b1), c2: a2.poisson_bracket(b2), d: b1.poisson_bracket(b2) })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicationRecord {
    pub name: String,
    pub identity: String,
    pub residual_terms: usize,
    pub pass: bool,
}

/// Formal partial of a generator polynomial, expanded in phase space.
fn partial(sys: &PhaseSystem, f: &GenPoly, var: &str) -> Result<RationalForm, VerifyError> {
    f.derivative(var).substitute(|n| sys.lookup(n).cloned()).map_err(VerifyError::UnknownGenerator)
}

/// The three cross-multiplied identities implied by the structure functions.
///
/// `d` overrides `D = {B1,B2}` (used to confirm a wrong `D` is detected).
/// With `F1_X = dF1/dX` and `F2_X = dF2/dX`:
///
/// ```text
/// (a)  {C1,B2} C1 - F1_A2 C2 - F1_B1 D = 0
/// (b)  {C2,B1} C2 - F2_A1 C1 + F2_B2 D = 0
/// (c)  {C1,C2} C1 C2 - F1_B1 F2_A1 C1 - F1_A2 F2_B2 C2 - F1_B1 F2_B2 D = 0
/// ```
///
/// A fourth record, (c'), evaluates (c) with the signs obtained by
/// eliminating `{C1,C2}` from (a), (b) and the squares `C1^2 = 2 F1`,
/// `C2^2 = 2 F2`:
///
/// ```text
/// (c') {C1,C2} C1 C2 + F1_B1 F2_A1 C1 - F1_A2 F2_B2 C2 - F1_B1 F2_B2 D = 0
/// ```
pub fn check_special_implications_with(
    sys: &PhaseSystem,
    f1: &GenPoly,
    f2: &GenPoly,
    brackets: &DerivedBrackets,
    d: &RationalForm,
) -> Result<Vec<ImplicationRecord>, VerifyError> {
    let get = |n: &str| sys.lookup(n).ok_or_else(|| VerifyError::UnknownGenerator(n.to_string()));
    let (b1, b2) = (get("B1")?, get("B2")?);
    let DerivedBrackets { c1, c2, .. } = brackets;
    let f1_a2 = partial(sys, f1, "A2")?;
    let f1_b1 = partial(sys, f1, "B1")?;
    let f2_a1 = partial(sys, f2, "A1")?;
    let f2_b2 = partial(sys, f2, "B2")?;

    let ab = || -> Vec<(&'static str, &'static str, RationalForm)> {
        let a = c1.poisson_bracket(b2).mul(c1).sub(&f1_a2.mul(c2)).sub(&f1_b1.mul(d));
        let b = c2.poisson_bracket(b1).mul(c2).sub(&f2_a1.mul(c1)).add(&f2_b2.mul(d));
        vec![
            ("a", "{C1,B2}*C1 - F1_A2*C2 - F1_B1*D", a),
            ("b", "{C2,B1}*C2 - F2_A1*C1 + F2_B2*D", b),
        ]
    };
    let c = || -> Vec<(&'static str, &'static str, RationalForm)> {
        let lhs = c1.poisson_bracket(c2).mul(c1).mul(c2);
        let t1 = f1_b1.mul(&f2_a1).mul(c1);
        let t2 = f1_a2.mul(&f2_b2).mul(c2);
        let t3 = f1_b1.mul(&f2_b2).mul(d);
        let common = lhs.sub(&t2).sub(&t3);
        vec![
            ("c", "{C1,C2}*C1*C2 - F1_B1*F2_A1*C1 - F1_A2*F2_B2*C2 - F1_B1*F2_B2*D", common.sub(&t1)),
            ("c'", "{C1,C2}*C1*C2 + F1_B1*F2_A1*C1 - F1_A2*F2_B2*C2 - F1_B1*F2_B2*D", common.add(&t1)),
        ]
    };
    let (mut first, second) = rayon::join(ab, c);
    first.extend(second);
    Ok(first
        .into_par_iter()
        .map(|(name, identity, r)| ImplicationRecord {
            name: name.to_string(),
            identity: identity.to_string(),
            residual_terms: r.term_count(),
            pass: r.is_zero(),
        })
        .collect())
}

pub fn check_special_implications(
    sys: &PhaseSystem,
    f1: &GenPoly,
    f2: &GenPoly,
) -> Result<Vec<ImplicationRecord>, VerifyError> {
    let brackets = DerivedBrackets::new(sys)?;
    let d = brackets.d.clone();
    check_special_implications_with(sys, f1, f2, &brackets, &d)
}
