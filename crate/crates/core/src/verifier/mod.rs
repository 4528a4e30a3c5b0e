//! Exact checks of the algebra: first integrals, the commutation pattern,
//! printed bracket identities, implied identities, and functional rank.

mod implications;
mod printed;
mod rank;
mod relations;
mod stanza;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use implications::{check_special_implications, check_special_implications_with, DerivedBrackets, ImplicationRecord};
pub use printed::{builtin_structures, diff_structure, parse_structures, DiffRow, PrintedStructure, StructureDiff};
pub use rank::{generic_rank, jacobian_rank, sample_point, RankReport, RATIONAL_POINTS};
pub use relations::{
    builtin_relations, builtin_relations_source, check_relation, check_relations, parse_relations, suggest_rhs, RelationRecord,
    RelationSpec, RelationStatus, RENDER_LIMIT,
};
pub use stanza::{parse_stanzas, Stanza};

use crate::dsl::{DslError, Scope};
use crate::kernel::KernelError;
use crate::system::PhaseSystem;
use crate::RationalForm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("line {line}: {msg}")]
    Format { line: u32, msg: String },
    #[error("relation `{relation}`: {source}")]
    Dsl { relation: String, source: DslError },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("structure functions are not available: {0}")]
    FitUnavailable(String),
}

/// The system's names plus `C1 = {A1,B1}`, `C2 = {A2,B2}`, `D = {B1,B2}`
/// when their ingredients exist.
pub fn relation_scope(sys: &PhaseSystem) -> Scope {
    let mut scope = sys.scope();
    for (name, a, b) in [("C1", "A1", "B1"), ("C2", "A2", "B2"), ("D", "B1", "B2")] {
        if let (Some(fa), Some(fb)) = (sys.lookup(a), sys.lookup(b)) {
            scope.define(name, fa.poisson_bracket(fb));
        }
    }
    scope
}

/// Whether `{H, S} = 0` exactly.
pub fn is_first_integral(sys: &PhaseSystem, name: &str) -> Result<bool, VerifyError> {
    let f = sys.lookup(name).ok_or_else(|| VerifyError::UnknownGenerator(name.to_string()))?;
    Ok(is_conserved(sys, f))
}

pub fn is_conserved(sys: &PhaseSystem, f: &RationalForm) -> bool {
    sys.hamiltonian.poisson_bracket(f).is_zero()
}

/// Which pairs of integrals Poisson-commute.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutationTable {
    pub names: Vec<String>,
    /// `vanishing[i][j]` iff `{S_i, S_j} = 0`.
    pub vanishing: Vec<Vec<bool>>,
}

impl CommutationTable {
    pub fn vanishes(&self, a: &str, b: &str) -> Option<bool> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.vanishing[i][j])
    }

    /// Off-diagonal vanishing pairs, `i < j`.
    pub fn vanishing_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.names.len() {
            for j in i + 1..self.names.len() {
                if self.vanishing[i][j] {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.names.len();
        (0..n).all(|i| (0..n).all(|j| self.vanishing[i][j] == self.vanishing[j][i]))
    }
}

/// Commutation table over the system's integrals.
pub fn commutation_table(sys: &PhaseSystem) -> CommutationTable {
    let names: Vec<String> = sys.integral_names().iter().map(|s| s.to_string()).collect();
    let n = names.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let zero: Vec<((usize, usize), bool)> = pairs
        .into_par_iter()
        .map(|(i, j)| {
            let fi = &sys.integrals[i].form;
            let fj = &sys.integrals[j].form;
            ((i, j), i == j || fi.poisson_bracket(fj).is_zero())
        })
        .collect();
    let mut vanishing = vec![vec![false; n]; n];
    for ((i, j), z) in zero {
        vanishing[i][j] = z;
        vanishing[j][i] = z;
    }
    CommutationTable { names, vanishing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Var;
    use crate::system::{builtin, NONDEGENERATE};

    #[test]
    fn position_is_not_conserved() {
        let sys = builtin(NONDEGENERATE).unwrap();
        assert!(!is_conserved(&sys, &RationalForm::var(Var::X)));
        assert!(matches!(is_first_integral(&sys, "G"), Err(VerifyError::UnknownGenerator(_))));
    }
}
