//! Exact fits of phase-space expressions as polynomials in named generators
//! with parameter-polynomial coefficients.

mod basis;
mod closure;
mod grading;
mod independence;
mod structure;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

pub use basis::{enumerate_basis, AnsatzBasis, BasisElement, Caps, ExpansionCache, Generator};
pub use closure::{closure_triples, fit_quadratic_closure, ternary_closure, ClosureEntry, ClosureReport};
pub use grading::Grade;
pub use independence::{linear_relation_search, LinearDependence};
pub use structure::{
    diff_terms, fit_structure_function, structure_degree_cap, StructureFit, TermDiff, TermStatus,
};

use crate::genpoly::GenPoly;
use crate::kernel::ExponentVector;
use crate::linalg::Echelon;
use crate::{RationalForm, Scalar};

type Terms = Vec<(ExponentVector, Scalar)>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("ansatz basis exceeds {limit} elements; lower the caps")]
    CapTooLarge { limit: usize },
    #[error("`{0}` is identically zero")]
    ZeroGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("{{{0},{1}}} vanishes; there is no structure function to fit")]
    VanishingBracket(String, String),
    #[error("no exact fit within the caps ({residual_terms} residual terms)")]
    FitInfeasible { residual_terms: usize },
    #[error("closure failed for {}", .0.join(", "))]
    ClosureFailure(Vec<String>),
}

/// Outcome of [`fit`]. Infeasibility is not an error: the residual is then
/// the part of the target the basis cannot represent.
#[derive(Clone, Debug)]
pub struct FitResult {
    /// Nonzero coefficients in basis order.
    pub coefficients: Vec<(BasisElement, Scalar)>,
    /// `target - sum c_i e_i`.
    pub residual: RationalForm,
    /// False when the basis is linearly dependent, so other solutions exist.
    pub unique: bool,
    pub rank: usize,
    pub basis_size: usize,
}

impl FitResult {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }

    /// The fitted combination as a polynomial in generator and parameter names.
    pub fn to_genpoly(&self, basis: &AnsatzBasis) -> GenPoly {
        let mut p = GenPoly::zero();
        for (el, c) in &self.coefficients {
            p.add_term(el.monomial(&basis.generators), c.clone());
        }
        p
    }
}

/// Solves `target = sum c_i e_i` exactly over the basis elements.
///
/// Both sides are written over one common divisor and compared monomial by
/// monomial. When the basis is dependent the free unknowns are set to zero,
/// which keeps the earliest elements in basis order.
pub fn fit(target: &RationalForm, basis: &AnsatzBasis) -> FitResult {
    let n = basis.len();
    // group elements by generator monomial so each expansion is lifted once
    let mut groups: BTreeMap<&[u32], Vec<usize>> = BTreeMap::new();
    for (i, el) in basis.elements.iter().enumerate() {
        groups.entry(el.gens.as_slice()).or_default().push(i);
    }
    let expansions: Vec<(&[u32], std::sync::Arc<RationalForm>)> = groups
        .keys()
        .copied()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|g| (g, basis.cache.expand(&basis.generators, g)))
        .collect();
    let den = expansions.iter().fold(target.denominator(), |d, (_, f)| d.lcm(&f.denominator()));

    let lifted: Vec<(&[u32], Terms)> = expansions
        .par_iter()
        .map(|(g, f)| (*g, f.numerator_over(&den).into_terms()))
        .collect();

    let mut rows: FxHashMap<ExponentVector, Vec<(usize, Scalar)>> = FxHashMap::default();
    for (g, terms) in &lifted {
        for &col in &groups[g] {
            let shift = basis.elements[col].param_monomial();
            for (e, c) in terms {
                rows.entry(e.mul(&shift)).or_default().push((col, c.clone()));
            }
        }
    }
    let rhs: FxHashMap<ExponentVector, Scalar> = target.numerator_over(&den).into_terms().into_iter().collect();
    for e in rhs.keys() {
        rows.entry(*e).or_default();
    }
    let mut keys: Vec<ExponentVector> = rows.keys().copied().collect();
    keys.sort_unstable_by(|a, b| b.cmp(a));

    let mut ech = Echelon::new(n);
    for key in keys {
        if ech.is_full_rank() {
            break;
        }
        let row = rows.remove(&key).unwrap_or_default();
        let b = rhs.get(&key).cloned().unwrap_or_else(Scalar::zero);
        ech.push(row, b);
    }
    let x = ech.solve();
    let coefficients: Vec<(BasisElement, Scalar)> = basis
        .elements
        .iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (e.clone(), c))
        .collect();
    let residual = residual_of(target, basis, &coefficients);
    FitResult { unique: ech.is_full_rank(), rank: ech.rank(), basis_size: n, coefficients, residual }
}

fn residual_of(
    target: &RationalForm,
    basis: &AnsatzBasis,
    coefficients: &[(BasisElement, Scalar)],
) -> RationalForm {
    let mut parts: Vec<(Scalar, RationalForm)> = vec![(Scalar::one(), target.clone())];
    parts.extend(coefficients.iter().map(|(el, c)| (-c.clone(), basis.expand(el))));
    RationalForm::linear_combination(parts.iter().map(|(c, f)| (c, f)))
}

/// Expands `sum c_i e_i` back to phase space.
pub fn expand_fit(basis: &AnsatzBasis, result: &FitResult) -> RationalForm {
    let forms: Vec<(Scalar, RationalForm)> =
        result.coefficients.iter().map(|(el, c)| (c.clone(), basis.expand(el))).collect();
    RationalForm::linear_combination(forms.iter().map(|(c, f)| (c, f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{PhaseVar, Var};
    use crate::scalar::int;
    use crate::system::{builtin, NONDEGENERATE};

    fn gens(names: &[&str]) -> Vec<Generator> {
        let sys = builtin(NONDEGENERATE).unwrap();
        names.iter().map(|n| Generator::new(n, sys.lookup(n).unwrap().clone()).unwrap()).collect()
    }

    #[test]
    fn recovers_a_product() {
        let g = gens(&["A1", "A2"]);
        let target = g[0].form.mul(&g[1].form).add(&g[0].form.mul_param_monomial(&ExponentVector::of(Var::K, 2)));
        let basis = enumerate_basis(g, Caps::new(4, 2).with_param_exponent(2), None, None).unwrap();
        let r = fit(&target, &basis);
        assert!(r.is_exact());
        let p = r.to_genpoly(&basis);
        assert_eq!(p, GenPoly::parse("A1*A2 + k^2*A1").unwrap());
        assert!(expand_fit(&basis, &r).sub(&target).is_zero());
    }

    #[test]
    fn odd_parity_target_is_infeasible() {
        let target = RationalForm::var(Var::X).mul(&RationalForm::phase(PhaseVar::Px));
        let g = gens(&["H", "A1", "A2", "B2"]);
        let basis = enumerate_basis(g, Caps::new(2, 2), None, None).unwrap();
        let r = fit(&target, &basis);
        assert!(!r.is_exact());
        assert!(r.residual.sub(&target).add(&expand_fit(&basis, &r)).is_zero());
    }

    #[test]
    fn zero_momentum_cap_leaves_parameter_monomials() {
        let basis = enumerate_basis(gens(&["A1", "B1"]), Caps::new(0, 3), None, None).unwrap();
        assert_eq!(basis.len(), 625);
        assert!(basis.elements.iter().all(|e| e.gens.iter().all(|&g| g == 0)));
    }

    #[test]
    fn cubic_basis_has_the_two_generator_shape() {
        let basis =
            enumerate_basis(gens(&["A2", "B2", "H"]), Caps::new(6, 3).with_param_exponent(0), None, None).unwrap();
        let monos: Vec<String> =
            basis.elements.iter().map(|e| e.monomial(&basis.generators).to_string()).collect();
        for m in ["A2^3", "B2^3", "A2^2*B2", "A2*B2^2", "A2^2*H", "H^3", "1"] {
            assert!(monos.contains(&m.to_string()), "{m} missing from {monos:?}");
        }
        assert_eq!(basis.len(), 20);
    }

    #[test]
    fn dependent_basis_is_flagged() {
        let mut g = gens(&["A1"]);
        g.push(Generator::new("A1copy", (*g[0].form).clone()).unwrap());
        let target = g[0].form.scale(&int(3));
        let basis = enumerate_basis(g, Caps::new(2, 1).with_param_exponent(0), None, None).unwrap();
        let r = fit(&target, &basis);
        assert!(r.is_exact());
        assert!(!r.unique);
        assert_eq!(r.coefficients.len(), 1);
    }

    #[test]
    fn guard_rejects_huge_bases() {
        let mut caps = Caps::new(0, 0);
        caps.max_elements = 10;
        assert!(matches!(
            enumerate_basis(gens(&["A1"]), caps, None, None),
            Err(FitError::CapTooLarge { limit: 10 })
        ));
    }
}
