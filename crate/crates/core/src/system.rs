//! Phase-space systems: a Hamiltonian, its named integrals, and helper
//! definitions, read from line-oriented `.psys` text.
//!
//! ```text
//! # comment
//! system kc3d-nondegenerate
//! params k, k1, k2, k3
//! integrals A1:2, A2:2, B1:4, B2:2, F:4
//! J1 = y*pz - z*py
//! H = (px^2 + py^2 + pz^2)/2 - k/sqrt(x^2 + y^2 + z^2) + ...
//! ```
//!
//! Every definition may use the names defined above it. `H` is the
//! Hamiltonian; names listed under `integrals` (with an optional declared
//! momentum degree) are the integrals; everything else is an auxiliary.

use std::sync::OnceLock;

use thiserror::Error;

use crate::dsl::{parse, DslError, FormLowering, Scope};
use crate::kernel::Var;
use crate::{RationalForm, Scalar};

pub const NONDEGENERATE: &str = "kc3d-nondegenerate";
pub const GENERALIZED: &str = "kc3d-generalized";

const NONDEGENERATE_SOURCE: &str = include_str!("../systems/kc3d-nondegenerate.psys");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("line {line}: {source}")]
    Dsl { line: u32, source: DslError },
    #[error("line {line}: {msg}")]
    Syntax { line: u32, msg: String },
    #[error("no Hamiltonian `H` defined")]
    MissingHamiltonian,
    #[error("integral `{0}` is declared but never defined")]
    UndefinedIntegral(String),
    #[error("`{0}` is defined twice")]
    Duplicate(String),
    #[error("integral `{name}` declared with momentum degree {declared} but has degree {actual}")]
    DegreeMismatch { name: String, declared: u32, actual: u32 },
    #[error("integral `{0}` is identically zero")]
    ZeroIntegral(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integral {
    pub name: String,
    pub form: RationalForm,
    pub degree: u32,
}

/// A Hamiltonian together with its integrals and auxiliary definitions.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSystem {
    pub name: String,
    pub params: Vec<Var>,
    pub hamiltonian: RationalForm,
    pub integrals: Vec<Integral>,
    pub auxiliaries: Vec<(String, RationalForm)>,
}

impl PhaseSystem {
    /// Looks up `H`, an integral, or an auxiliary by name.
    pub fn lookup(&self, name: &str) -> Option<&RationalForm> {
        if name == "H" {
            return Some(&self.hamiltonian);
        }
        self.integrals
            .iter()
            .find(|i| i.name == name)
            .map(|i| &i.form)
            .or_else(|| self.auxiliaries.iter().find(|(n, _)| n == name).map(|(_, f)| f))
    }

    pub fn integral(&self, name: &str) -> Option<&Integral> {
        self.integrals.iter().find(|i| i.name == name)
    }

    pub fn integral_names(&self) -> Vec<&str> {
        self.integrals.iter().map(|i| i.name.as_str()).collect()
    }

    /// Scope with the system's parameters and every named function.
    pub fn scope(&self) -> Scope {
        let mut scope = Scope::new(&self.params);
        for (n, f) in &self.auxiliaries {
            scope.define(n.clone(), f.clone());
        }
        scope.define("H", self.hamiltonian.clone());
        for i in &self.integrals {
            scope.define(i.name.clone(), i.form.clone());
        }
        scope
    }

    /// Parses and lowers `text` against this system's names.
    pub fn expression(&self, text: &str) -> Result<RationalForm, DslError> {
        let scope = self.scope();
        FormLowering::new(&scope).lower(&parse(text)?)
    }

    /// Momentum degree of `name`, falling back to the computed degree.
    pub fn degree_of(&self, name: &str) -> Option<u32> {
        if let Some(i) = self.integral(name) {
            return Some(i.degree);
        }
        self.lookup(name).and_then(|f| f.momentum_degree().ok())
    }

    /// Named functions in a stable order: `H`, integrals, auxiliaries.
    pub fn named_forms(&self) -> Vec<(&str, &RationalForm)> {
        let mut out = vec![("H", &self.hamiltonian)];
        out.extend(self.integrals.iter().map(|i| (i.name.as_str(), &i.form)));
        out.extend(self.auxiliaries.iter().map(|(n, f)| (n.as_str(), f)));
        out
    }
}

fn split_list(rest: &str) -> Vec<&str> {
    rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Parses a `.psys` definition file.
pub fn parse_system(text: &str) -> Result<PhaseSystem, SystemError> {
    let mut name = String::from("unnamed");
    let mut params: Option<Vec<Var>> = None;
    let mut declared: Vec<(String, Option<u32>)> = Vec::new();
    let mut scope = Scope::new(&[]);
    let mut defs: Vec<(String, RationalForm)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = u32::try_from(idx + 1).unwrap_or(u32::MAX);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: String| SystemError::Syntax { line: line_no, msg };
        if let Some((lhs, rhs)) = line.split_once('=') {
            let lhs = lhs.trim();
            if !lhs.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || !lhs.starts_with(|c: char| c.is_ascii_alphabetic())
            {
                return Err(syntax(format!("`{lhs}` is not a valid name")));
            }
            if Var::from_name(lhs).is_some() || lhs == "sqrt" {
                return Err(syntax(format!("`{lhs}` is a reserved symbol")));
            }
            if defs.iter().any(|(n, _)| n == lhs) {
                return Err(SystemError::Duplicate(lhs.to_string()));
            }
            let expr = parse(rhs).map_err(|e| SystemError::Dsl { line: line_no, source: e.at_line(line_no) })?;
            let form = FormLowering::new(&scope)
                .lower(&expr)
                .map_err(|e| SystemError::Dsl { line: line_no, source: e.at_line(line_no) })?;
            scope.define(lhs, form.clone());
            defs.push((lhs.to_string(), form));
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "system" => name = rest.trim().to_string(),
            "params" => {
                let mut ps = Vec::new();
                for p in split_list(rest) {
                    match Var::from_name(p) {
                        Some(v) if v.is_param() => ps.push(v),
                        _ => return Err(SystemError::UnknownParameter(p.to_string())),
                    }
                }
                scope = Scope::new(&ps);
                params = Some(ps);
            }
            "integrals" => {
                for item in split_list(rest) {
                    let (n, deg) = match item.split_once(':') {
                        Some((n, d)) => {
                            let d = d.trim().parse::<u32>().map_err(|_| syntax(format!("bad degree in `{item}`")))?;
                            (n.trim(), Some(d))
                        }
                        None => (item, None),
                    };
                    declared.push((n.to_string(), deg));
                }
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }

    let mut hamiltonian = None;
    let mut auxiliaries = Vec::new();
    let mut forms = std::collections::HashMap::new();
    for (n, f) in defs {
        if n == "H" {
            hamiltonian = Some(f);
        } else if declared.iter().any(|(d, _)| *d == n) {
            forms.insert(n, f);
        } else {
            auxiliaries.push((n, f));
        }
    }
    let hamiltonian = hamiltonian.ok_or(SystemError::MissingHamiltonian)?;
    let mut integrals = Vec::new();
    for (n, deg) in declared {
        let form = forms.remove(&n).ok_or_else(|| SystemError::UndefinedIntegral(n.clone()))?;
        let actual = form.momentum_degree().map_err(|_| SystemError::ZeroIntegral(n.clone()))?;
        if let Some(d) = deg {
            if d != actual {
                return Err(SystemError::DegreeMismatch { name: n, declared: d, actual });
            }
        }
        integrals.push(Integral { name: n, form, degree: actual });
    }
    Ok(PhaseSystem {
        name,
        params: params.unwrap_or_default(),
        hamiltonian,
        integrals,
        auxiliaries,
    })
}

/// Substitutes exact values for some parameters.
pub fn specialize(sys: &PhaseSystem, assignment: &[(&str, Scalar)]) -> Result<PhaseSystem, SystemError> {
    let mut resolved = Vec::new();
    for (name, value) in assignment {
        match Var::from_name(name) {
            Some(v) if v.is_param() && sys.params.contains(&v) => resolved.push((v, value.clone())),
            _ => return Err(SystemError::UnknownParameter(name.to_string())),
        }
    }
    let apply = |f: &RationalForm| resolved.iter().fold(f.clone(), |acc, (v, q)| acc.substitute(*v, q));
    Ok(PhaseSystem {
        name: sys.name.clone(),
        params: sys.params.iter().copied().filter(|p| !resolved.iter().any(|(v, _)| v == p)).collect(),
        hamiltonian: apply(&sys.hamiltonian),
        integrals: sys
            .integrals
            .iter()
            .map(|i| Integral { name: i.name.clone(), form: apply(&i.form), degree: i.degree })
            .collect(),
        auxiliaries: sys.auxiliaries.iter().map(|(n, f)| (n.clone(), apply(f))).collect(),
    })
}

fn nondegenerate() -> &'static PhaseSystem {
    static SYS: OnceLock<PhaseSystem> = OnceLock::new();
    SYS.get_or_init(|| parse_system(NONDEGENERATE_SOURCE).expect("built-in catalog parses"))
}

/// Built-in catalog entries.
pub fn builtin(name: &str) -> Result<PhaseSystem, SystemError> {
    match name {
        NONDEGENERATE => Ok(nondegenerate().clone()),
        GENERALIZED => {
            let mut sys = specialize(nondegenerate(), &[("k3", crate::scalar::int(0))])?;
            sys.name = GENERALIZED.to_string();
            Ok(sys)
        }
        other => Err(SystemError::UnknownSystem(other.to_string())),
    }
}

pub fn builtin_names() -> [&'static str; 2] {
    [NONDEGENERATE, GENERALIZED]
}

/// Source text of the built-in non-degenerate catalog entry.
pub fn builtin_source() -> &'static str {
    NONDEGENERATE_SOURCE
}

/// Loads either a built-in name or a path to a `.psys` file.
pub fn load(source: &str) -> Result<PhaseSystem, SystemError> {
    if builtin_names().contains(&source) {
        return builtin(source);
    }
    if source.ends_with(".psys") {
        let text = std::fs::read_to_string(source)
            .map_err(|e| SystemError::Syntax { line: 0, msg: format!("{source}: {e}") })?;
        return parse_system(&text);
    }
    Err(SystemError::UnknownSystem(source.to_string()))
}
