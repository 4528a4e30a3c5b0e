use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::{enumerate_basis, fit, AnsatzBasis, Caps, ExpansionCache, FitError, FitResult, Generator, Grade};
use crate::genpoly::GenPoly;
use crate::system::PhaseSystem;
use crate::RationalForm;

/// One nested bracket `{outer, {inner.0, inner.1}}` and its fit.
#[derive(Clone, Debug)]
pub struct ClosureEntry {
    pub outer: String,
    pub inner: (String, String),
    /// Fitted polynomial in the generators, `H`, and the parameters.
    pub polynomial: GenPoly,
    pub exact: bool,
    pub unique: bool,
    pub residual_terms: usize,
    pub basis_size: usize,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub generators: Vec<String>,
    pub entries: Vec<ClosureEntry>,
}

impl ClosureReport {
    pub fn failures(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| !e.exact)
            .map(|e| format!("{{{},{{{},{}}}}}", e.outer, e.inner.0, e.inner.1))
            .collect()
    }

    pub fn is_closed(&self) -> bool {
        self.entries.iter().all(|e| e.exact)
    }

    pub fn entry(&self, outer: &str, a: &str, b: &str) -> Option<&ClosureEntry> {
        self.entries.iter().find(|e| e.outer == outer && e.inner.0 == a && e.inner.1 == b)
    }

    /// JSON tables; within each entry `order` is the degree in the generators
    /// other than `H`, so order 2 terms are `d` constants and order 1 terms `c`.
    pub fn to_json(&self, generators: &[&str]) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            monomial: String,
            coefficient: String,
            order: u32,
        }
        #[derive(Serialize)]
        struct Table {
            outer: String,
            inner_pair: [String; 2],
            exact: bool,
            unique: bool,
            residual_terms: usize,
            terms: Vec<Term>,
        }
        let tables: Vec<Table> = self
            .entries
            .iter()
            .map(|e| Table {
                outer: e.outer.clone(),
                inner_pair: [e.inner.0.clone(), e.inner.1.clone()],
                exact: e.exact,
                unique: e.unique,
                residual_terms: e.residual_terms,
                terms: e
                    .polynomial
                    .terms()
                    .map(|(m, c)| Term { monomial: m.to_string(), coefficient: c.to_string(), order: m.degree_in(generators) })
                    .collect(),
            })
            .collect();
        serde_json::to_value(tables).expect("serializable")
    }
}

/// Every `(outer, (j, k))` with `j < k` in the listed order.
pub fn closure_triples(names: &[&str]) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for o in names {
        for (j, a) in names.iter().enumerate() {
            for b in &names[j + 1..] {
                out.push((o.to_string(), a.to_string(), b.to_string()));
            }
        }
    }
    out
}

fn closure_generators(sys: &PhaseSystem) -> Result<Vec<Generator>, FitError> {
    let mut generators = sys
        .integral_names()
        .iter()
        .map(|n| Generator::new(n, sys.lookup(n).unwrap().clone()))
        .collect::<Result<Vec<_>, _>>()?;
    generators.push(Generator::new("H", sys.hamiltonian.clone())?.coefficient());
    Ok(generators)
}

fn fit_quadratic(
    generators: &[Generator],
    target: &RationalForm,
    param_exponent: u32,
    cache: Arc<ExpansionCache>,
) -> Result<(AnsatzBasis, FitResult), FitError> {
    let momentum = target.momentum_degree().unwrap_or(0);
    let caps = Caps::new(momentum, 2).with_param_exponent(param_exponent);
    let basis = enumerate_basis(generators.to_vec(), caps, Grade::of_form(target), Some(cache))?;
    let r = fit(target, &basis);
    Ok((basis, r))
}

/// Fits `target` over quadratic polynomials in the integrals with
/// coefficients polynomial in `H` and the parameters.
pub fn fit_quadratic_closure(
    sys: &PhaseSystem,
    target: &RationalForm,
    param_exponent: u32,
) -> Result<(AnsatzBasis, FitResult), FitError> {
    fit_quadratic(&closure_generators(sys)?, target, param_exponent, Arc::default())
}

/// Fits every `{S_i, {S_j, S_k}}` over quadratic polynomials in the integrals
/// with coefficients polynomial in `H` and the parameters.
pub fn ternary_closure(sys: &PhaseSystem, param_exponent: u32) -> Result<ClosureReport, FitError> {
    let names = sys.integral_names();
    let generators = closure_generators(sys)?;
    let cache = Arc::new(ExpansionCache::default());

    let triples = closure_triples(&names);
    let entries = triples
        .par_iter()
        .map(|(o, a, b)| -> Result<ClosureEntry, FitError> {
            let inner = sys.lookup(a).unwrap().poisson_bracket(sys.lookup(b).unwrap());
            let target = sys.lookup(o).unwrap().poisson_bracket(&inner);
            let (basis, r) = fit_quadratic(&generators, &target, param_exponent, cache.clone())?;
            Ok(ClosureEntry {
                outer: o.clone(),
                inner: (a.clone(), b.clone()),
                polynomial: r.to_genpoly(&basis),
                exact: r.is_exact(),
                unique: r.unique,
                residual_terms: r.residual.term_count(),
                basis_size: basis.len(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClosureReport { generators: names.iter().map(|s| s.to_string()).collect(), entries })
}
