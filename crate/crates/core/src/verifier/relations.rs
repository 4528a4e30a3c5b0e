use rayon::prelude::*;
use serde::Serialize;

use super::stanza::parse_stanzas;
use super::{relation_scope, VerifyError};
use crate::dsl::{parse, FormLowering};
use crate::fitter::fit_quadratic_closure;
use crate::genpoly::GenPoly;
use crate::system::PhaseSystem;
use crate::RationalForm;

const RELATIONS: &str = include_str!("../../relations/kc3d.rel");

/// Residuals with at most this many terms are rendered in reports.
pub const RENDER_LIMIT: usize = 24;

/// One bracket identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSpec {
    pub name: String,
    pub lhs: String,
    /// Verbatim right-hand side.
    pub rhs: String,
    /// Replacement right-hand side for a misprint, if any.
    pub corrected: Option<String>,
    pub source: String,
    pub line: u32,
}

pub fn parse_relations(text: &str) -> Result<Vec<RelationSpec>, VerifyError> {
    parse_stanzas(text, &["name", "lhs", "rhs", "corrected", "source"])?
        .into_iter()
        .map(|s| {
            Ok(RelationSpec {
                name: s.require("name")?.to_string(),
                lhs: s.require("lhs")?.to_string(),
                rhs: s.require("rhs")?.to_string(),
                corrected: s.get("corrected").map(str::to_string),
                source: s.get("source").unwrap_or("").to_string(),
                line: s.line,
            })
        })
        .collect()
}

/// The shipped relation table of the non-degenerate system.
pub fn builtin_relations() -> Vec<RelationSpec> {
    parse_relations(RELATIONS).expect("shipped relation table parses")
}

pub fn builtin_relations_source() -> &'static str {
    RELATIONS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationStatus {
    /// The verbatim right-hand side holds.
    Pass,
    /// Only the corrected right-hand side holds; the printed one is a misprint.
    Corrected,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationRecord {
    pub relation: String,
    pub status: RelationStatus,
    /// Terms of `lhs - rhs` for the verbatim right-hand side.
    pub residual_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_residual_terms: Option<usize>,
    pub source: String,
}

impl RelationRecord {
    pub fn holds(&self) -> bool {
        self.status != RelationStatus::Fail
    }
}

fn render_small(f: &RationalForm) -> Option<String> {
    (f.term_count() <= RENDER_LIMIT).then(|| f.to_string())
}

fn lower_side(ctx: &FormLowering<'_>, rel: &RelationSpec, text: &str) -> Result<RationalForm, VerifyError> {
    let expr = parse(text).map_err(|source| VerifyError::Dsl { relation: rel.name.clone(), source })?;
    ctx.lower(&expr).map_err(|source| VerifyError::Dsl { relation: rel.name.clone(), source })
}

pub(crate) fn check_in(ctx: &FormLowering<'_>, rel: &RelationSpec) -> Result<RelationRecord, VerifyError> {
    let lhs = lower_side(ctx, rel, &rel.lhs)?;
    let rhs = lower_side(ctx, rel, &rel.rhs)?;
    let residual = lhs.sub(&rhs);
    let mut record = RelationRecord {
        relation: rel.name.clone(),
        status: if residual.is_zero() { RelationStatus::Pass } else { RelationStatus::Fail },
        residual_terms: residual.term_count(),
        residual: render_small(&residual),
        corrected_residual_terms: None,
        source: rel.source.clone(),
    };
    if let (false, Some(c)) = (residual.is_zero(), &rel.corrected) {
        let corrected = lhs.sub(&lower_side(ctx, rel, c)?);
        record.corrected_residual_terms = Some(corrected.term_count());
        if corrected.is_zero() {
            record.status = RelationStatus::Corrected;
        }
    }
    Ok(record)
}

/// Fits the left-hand side over quadratic polynomials in the integrals,
/// giving the right-hand side the identity should carry.
pub fn suggest_rhs(sys: &PhaseSystem, rel: &RelationSpec, param_exponent: u32) -> Result<GenPoly, VerifyError> {
    let scope = relation_scope(sys);
    let lhs = lower_side(&FormLowering::new(&scope), rel, &rel.lhs)?;
    let (basis, fit) =
        fit_quadratic_closure(sys, &lhs, param_exponent).map_err(|e| VerifyError::FitUnavailable(e.to_string()))?;
    if !fit.is_exact() {
        return Err(VerifyError::FitUnavailable(format!(
            "`{}` leaves {} residual terms",
            rel.name,
            fit.residual.term_count()
        )));
    }
    Ok(fit.to_genpoly(&basis))
}

/// Checks one identity against a system.
pub fn check_relation(sys: &PhaseSystem, rel: &RelationSpec) -> Result<RelationRecord, VerifyError> {
    let scope = relation_scope(sys);
    check_in(&FormLowering::new(&scope), rel)
}

/// Checks a whole table, sharing bracket evaluations between relations.
pub fn check_relations(sys: &PhaseSystem, rels: &[RelationSpec]) -> Result<Vec<RelationRecord>, VerifyError> {
    let scope = relation_scope(sys);
    let ctx = FormLowering::new(&scope);
    rels.par_iter().map(|r| check_in(&ctx, r)).collect()
}
