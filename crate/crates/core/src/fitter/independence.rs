use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{FitError, Grade};
use crate::genpoly::{GenMonomial, GenPoly};
use crate::kernel::{ExponentVector, Var};
use crate::linalg::Echelon;
use crate::system::PhaseSystem;
use crate::{RationalForm, Scalar};

/// A nontrivial relation `sum_i c_i S_i + c_0 = 0` with parameter-polynomial
/// coefficients; `coefficients[i]` belongs to `names[i]`, the last entry is
/// the constant.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearDependence {
    pub names: Vec<String>,
    pub coefficients: Vec<GenPoly>,
}

/// Searches for a linear dependency among the named functions over
/// `Q[k, k1, k2, k3]` (each parameter exponent at most `param_exponent`).
/// `Ok(None)` means only the trivial relation exists.
pub fn linear_relation_search(
    sys: &PhaseSystem,
    names: &[&str],
    param_exponent: u32,
) -> Result<Option<LinearDependence>, FitError> {
    let mut forms: Vec<RationalForm> = names
        .iter()
        .map(|n| sys.lookup(n).cloned().ok_or_else(|| FitError::UnknownGenerator(n.to_string())))
        .collect::<Result<_, _>>()?;
    forms.push(RationalForm::one());
    let grades: Option<Vec<Grade>> = forms.iter().map(Grade::of_form).collect();

    let pe = param_exponent.min(u32::from(u8::MAX)) as u8;
    let mut params = Vec::new();
    for a in 0..=pe {
        for b in 0..=pe {
            for c in 0..=pe {
                for d in 0..=pe {
                    let mut e = ExponentVector::ONE;
                    for (v, x) in Var::PARAMS.iter().zip([a, b, c, d]) {
                        e.set(*v, x);
                    }
                    params.push(e);
                }
            }
        }
    }
    params.sort();

    // columns: (param monomial, function index); weight classes are independent
    let mut classes: BTreeMap<Option<Grade>, Vec<(ExponentVector, usize)>> = BTreeMap::new();
    for p in &params {
        for i in 0..forms.len() {
            let g = grades.as_ref().map(|gs| gs[i] + Grade::of_monomial(p));
            classes.entry(g).or_default().push((*p, i));
        }
    }

    for cols in classes.values() {
        if cols.len() < 2 {
            continue;
        }
        let den = cols.iter().fold(crate::kernel::Denominator::ONE, |d, (_, i)| d.lcm(&forms[*i].denominator()));
        let mut rows: FxHashMap<ExponentVector, Vec<(usize, Scalar)>> = FxHashMap::default();
        for (j, (p, i)) in cols.iter().enumerate() {
            for (e, c) in forms[*i].numerator_over(&den).terms() {
                rows.entry(e.mul(p)).or_default().push((j, c.clone()));
            }
        }
        let mut keys: Vec<_> = rows.keys().copied().collect();
        keys.sort_unstable_by(|a, b| b.cmp(a));
        let mut ech = Echelon::new(cols.len());
        for k in keys {
            if ech.is_full_rank() {
                break;
            }
            ech.push(rows.remove(&k).unwrap(), Scalar::zero());
        }
        if let Some(v) = ech.nullspace().into_iter().next() {
            let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Scalar::one);
            let mut coefficients = vec![GenPoly::zero(); forms.len()];
            for ((p, i), c) in cols.iter().zip(v) {
                if c.is_zero() {
                    continue;
                }
                let mono = GenMonomial::from_pairs(
                    Var::PARAMS.iter().map(|v| (v.name().to_string(), u32::from(p.get(*v)))),
                );
                coefficients[*i].add_term(mono, c / &lead);
            }
            let mut labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            labels.push("1".into());
            return Ok(Some(LinearDependence { names: labels, coefficients }));
        }
    }
    Ok(None)
}
