use serde::Serialize;

use super::stanza::parse_stanzas;
use super::VerifyError;
use crate::fitter::{diff_terms, StructureFit, TermStatus};
use crate::genpoly::{GenMonomial, GenPoly};

const STRUCTURE: &str = include_str!("../../relations/kc3d-structure.rel");

/// A printed structure function with its known misprints.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedStructure {
    pub name: String,
    pub pair: (String, String),
    pub extra: String,
    pub printed: GenPoly,
    /// `(printed term, replacement term)`.
    pub suspects: Vec<(GenPoly, GenPoly)>,
    pub source: String,
}

impl PrintedStructure {
    /// The printed polynomial with every suspect term replaced.
    pub fn amended(&self) -> GenPoly {
        self.suspects.iter().fold(self.printed.clone(), |p, (bad, good)| p.sub(bad).add(good))
    }

    fn flagged(&self, m: &GenMonomial) -> bool {
        self.suspects.iter().any(|(a, b)| !a.coefficient(m).eq(&b.coefficient(m)))
    }
}

fn genpoly(text: &str, line: u32) -> Result<GenPoly, VerifyError> {
    GenPoly::parse(text).map_err(|e| VerifyError::Format { line, msg: e.to_string() })
}

pub fn parse_structures(text: &str) -> Result<Vec<PrintedStructure>, VerifyError> {
    parse_stanzas(text, &["name", "pair", "extra", "printed", "suspect", "source"])?
        .into_iter()
        .map(|s| {
            let pair = s.require("pair")?;
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| VerifyError::Format { line: s.line_of("pair"), msg: "pair needs two names".into() })?;
            let mut suspects = Vec::new();
            for (v, line) in s.all("suspect") {
                let (bad, good) = v
                    .split_once("=>")
                    .ok_or_else(|| VerifyError::Format { line, msg: "expected `printed => fitted`".into() })?;
                suspects.push((genpoly(bad, line)?, genpoly(good, line)?));
            }
            Ok(PrintedStructure {
                name: s.require("name")?.to_string(),
                pair: (a.trim().to_string(), b.trim().to_string()),
                extra: s.require("extra")?.to_string(),
                printed: genpoly(s.require("printed")?, s.line_of("printed"))?,
                suspects,
                source: s.get("source").unwrap_or("").to_string(),
            })
        })
        .collect()
}

pub fn builtin_structures() -> Vec<PrintedStructure> {
    parse_structures(STRUCTURE).expect("shipped structure table parses")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiffRow {
    pub monomial: String,
    pub paper: String,
    pub fitted: String,
    pub status: &'static str,
    /// The row is covered by a listed misprint.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureDiff {
    pub name: String,
    pub rows: Vec<DiffRow>,
    /// Disagreeing rows not covered by a listed misprint.
    pub unexplained: usize,
    /// The printed function with the listed replacements equals the fit.
    pub amended_matches: bool,
    pub verbatim_matches: bool,
}

impl StructureDiff {
    pub fn agrees_except_flagged(&self) -> bool {
        self.unexplained == 0 && self.amended_matches
    }
}

/// PAPER vs FITTED comparison of one structure function.
pub fn diff_structure(printed: &PrintedStructure, fitted: &StructureFit) -> StructureDiff {
    let rows: Vec<DiffRow> = diff_terms(&printed.printed, &fitted.function)
        .into_iter()
        .map(|d| DiffRow {
            monomial: d.monomial.to_string(),
            flagged: printed.flagged(&d.monomial),
            paper: d.paper.to_string(),
            fitted: d.fitted.to_string(),
            status: match d.status {
                TermStatus::Match => "match",
                TermStatus::Differs => "differs",
                TermStatus::PaperOnly => "paper-only",
                TermStatus::FittedOnly => "fitted-only",
            },
        })
        .collect();
    StructureDiff {
        name: printed.name.clone(),
        unexplained: rows.iter().filter(|r| r.status != "match" && !r.flagged).count(),
        rows,
        amended_matches: printed.amended() == fitted.function,
        verbatim_matches: printed.printed == fitted.function,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_structures_parse() {
        let s = builtin_structures();
        assert_eq!(s.iter().map(|p| p.name.as_str()).collect::<Vec<_>>(), ["F1", "F2", "F3"]);
        assert_eq!(s[0].suspects.len(), 1);
        assert!(s[1].suspects.is_empty());
        assert_eq!(s[2].suspects.len(), 2);
        // the misprinted lower-case h survives parsing as its own symbol
        assert!(s[0].printed.symbols().contains(&"h".to_string()));
        assert!(!s[0].amended().symbols().contains(&"h".to_string()));
    }
}
