use std::sync::Arc;

use num_traits::Zero;

use super::{enumerate_basis, fit, AnsatzBasis, Caps, ExpansionCache, FitError, FitResult, Generator, Grade};
use crate::genpoly::{GenMonomial, GenPoly};
use crate::scalar::ratio;
use crate::system::PhaseSystem;
use crate::Scalar;

const GENERATOR_ORDER: [&str; 6] = ["A1", "A2", "B1", "B2", "F", "H"];

/// Generator-degree cap of the structure function of a pair: cubic when both
/// members are quadratic in the momenta, quartic otherwise.
pub fn structure_degree_cap(deg_a: u32, deg_b: u32) -> u32 {
    if deg_a.max(deg_b) <= 2 {
        3
    } else {
        4
    }
}

/// `{A,B}^2 = 2 F(A, B, H, extra)` solved for `F`.
#[derive(Clone, Debug)]
pub struct StructureFit {
    pub pair: (String, String),
    pub extra: String,
    pub basis: AnsatzBasis,
    /// Fit of `{A,B}^2` itself.
    pub fit: FitResult,
    /// `F`, i.e. half the fitted square.
    pub function: GenPoly,
}

/// Fits the structure function of the pair `(a, b)` over `{a, b, H, extra}`.
pub fn fit_structure_function(
    sys: &PhaseSystem,
    a: &str,
    b: &str,
    extra: &str,
    param_exponent: u32,
    cache: Option<Arc<ExpansionCache>>,
) -> Result<StructureFit, FitError> {
    let form = |n: &str| sys.lookup(n).cloned().ok_or_else(|| FitError::UnknownGenerator(n.to_string()));
    let (fa, fb) = (form(a)?, form(b)?);
    let c = fa.poisson_bracket(&fb);
    if c.is_zero() {
        return Err(FitError::VanishingBracket(a.to_string(), b.to_string()));
    }
    let target = c.mul(&c);

    let mut names: Vec<&str> = vec![a, b, "H", extra];
    names.sort_by_key(|n| GENERATOR_ORDER.iter().position(|g| g == n).unwrap_or(GENERATOR_ORDER.len()));
    names.dedup();
    let generators = names.iter().map(|n| Generator::new(n, form(n)?)).collect::<Result<Vec<_>, _>>()?;

    let momentum = target.momentum_degree().expect("nonzero target");
    let cap = structure_degree_cap(
        fa.momentum_degree().unwrap_or(0),
        fb.momentum_degree().unwrap_or(0),
    );
    let caps = Caps::new(momentum, cap).with_param_exponent(param_exponent);
    let basis = enumerate_basis(generators, caps, Grade::of_form(&target), cache)?;
    let result = fit(&target, &basis);
    if !result.is_exact() {
        return Err(FitError::FitInfeasible { residual_terms: result.residual.term_count() });
    }
    let function = result.to_genpoly(&basis).scale(&ratio(1, 2));
    Ok(StructureFit { pair: (a.to_string(), b.to_string()), extra: extra.to_string(), basis, fit: result, function })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermStatus {
    Match,
    Differs,
    PaperOnly,
    FittedOnly,
}

/// One row of a PAPER vs FITTED comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct TermDiff {
    pub monomial: GenMonomial,
    pub paper: Scalar,
    pub fitted: Scalar,
    pub status: TermStatus,
}

/// Term-by-term comparison in descending monomial order.
pub fn diff_terms(paper: &GenPoly, fitted: &GenPoly) -> Vec<TermDiff> {
    let mut monos: Vec<GenMonomial> = paper.terms().chain(fitted.terms()).map(|(m, _)| m.clone()).collect();
    monos.sort_by(|a, b| b.cmp(a));
    monos.dedup();
    monos
        .into_iter()
        .map(|m| {
            let (p, f) = (paper.coefficient(&m), fitted.coefficient(&m));
            let status = match (p.is_zero(), f.is_zero()) {
                (false, true) => TermStatus::PaperOnly,
                (true, false) => TermStatus::FittedOnly,
                _ if p == f => TermStatus::Match,
                _ => TermStatus::Differs,
            };
            TermDiff { monomial: m, paper: p, fitted: f, status }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_follow_declared_degrees() {
        assert_eq!(structure_degree_cap(2, 2), 3);
        assert_eq!(structure_degree_cap(2, 4), 4);
    }

    #[test]
    fn diff_reports_each_kind() {
        let paper = GenPoly::parse("A1 + 2*B1 + h^2").unwrap();
        let fitted = GenPoly::parse("A1 + 3*B1 + H^2").unwrap();
        let d = diff_terms(&paper, &fitted);
        let status = |s: &str| d.iter().find(|t| t.monomial.to_string() == s).unwrap().status;
        assert_eq!(status("A1"), TermStatus::Match);
        assert_eq!(status("B1"), TermStatus::Differs);
        assert_eq!(status("h^2"), TermStatus::PaperOnly);
        assert_eq!(status("H^2"), TermStatus::FittedOnly);
    }
}
