use std::fmt::Write as _;
use std::fs::File;

use pbkit::dsl::{parse, FormLowering};
use pbkit::fitter::{fit_structure_function, linear_relation_search, ternary_closure, FitError};
use pbkit::numeric::{conservation_report, integrate, seeded_points, BracketProbe, NumericError, PhasePoint};
use pbkit::system::{load, PhaseSystem};
use pbkit::verifier::*;
use pbkit::RationalForm;
use serde_json::{json, Value};

use crate::{Cli, Command, Format};

const RANK_SAMPLES: usize = 2;
const FD_POINTS: usize = 10;
const FD_STEP: f64 = 1e-5;
/// Generic rank of integrals in a six-dimensional phase space.
const MAX_RANK: usize = 5;

/// Outcome of one subcommand: whether its checks passed and both renderings.
struct Report {
    pass: bool,
    text: String,
    json: Value,
}

/// Runs the parsed command; `Ok(pass)` or a usage/input error.
pub fn run(cli: &Cli) -> Result<bool, String> {
    let sys = load(&cli.system).map_err(|e| format!("{}: {e}", cli.system))?;
    let report = match &cli.command {
        Command::Catalog => catalog(&sys),
        Command::Bracket { f, g } => bracket(&sys, f, g)?,
        Command::Verify => verify(cli, &sys)?,
        Command::Closure => closure(cli, &sys)?,
        Command::FitStructure { a, b, extra } => fit_structure(cli, &sys, a, b, extra)?,
        Command::Independence => independence(cli, &sys)?,
        Command::Orbit { csv } => orbit(cli, &sys, csv.as_deref())?,
        Command::DiffPaper => diff_paper(cli, &sys)?,
    };
    match cli.format {
        Format::Text => print!("{}", report.text),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
    }
    Ok(report.pass)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn catalog(sys: &PhaseSystem) -> Report {
    let mut text = format!(
        "system {}\nparams {}\n",
        sys.name,
        sys.params.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
    );
    let mut functions = Vec::new();
    for (name, f) in sys.named_forms() {
        let role = if name == "H" {
            "hamiltonian"
        } else if sys.integral(name).is_some() {
            "integral"
        } else {
            "auxiliary"
        };
        let degree = f.momentum_degree().ok();
        let deg = degree.map_or("-".to_string(), |d| d.to_string());
        writeln!(text, "{name:<6} {role:<12} degree {deg:<2} terms {}", f.term_count()).unwrap();
        functions.push(json!({
            "name": name, "role": role, "degree": degree, "terms": f.term_count(), "expression": f.to_string(),
        }));
    }
    let params: Vec<&str> = sys.params.iter().map(|p| p.name()).collect();
    Report { pass: true, text, json: json!({ "system": sys.name, "params": params, "functions": functions }) }
}

fn lower_in(ctx: &FormLowering<'_>, text: &str) -> Result<RationalForm, String> {
    let e = parse(text).map_err(|e| format!("`{text}`: {e}"))?;
    ctx.lower(&e).map_err(|e| format!("`{text}`: {e}"))
}

fn bracket(sys: &PhaseSystem, f: &str, g: &str) -> Result<Report, String> {
    let scope = relation_scope(sys);
    let ctx = FormLowering::new(&scope);
    let b = lower_in(&ctx, f)?.poisson_bracket(&lower_in(&ctx, g)?);
    Ok(Report {
        pass: true,
        text: format!("{b}\n"),
        json: json!({ "f": f, "g": g, "bracket": b.to_string(), "terms": b.term_count() }),
    })
}

fn relation_table(cli: &Cli, sys: &PhaseSystem) -> Result<Option<Vec<RelationSpec>>, String> {
    if let Some(path) = &cli.relations {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        return parse_relations(&text).map(Some).map_err(|e| format!("{}: {e}", path.display()));
    }
    let has_all = ["A1", "A2", "B1", "B2", "F"].iter().all(|n| sys.lookup(n).is_some());
    Ok(has_all.then(builtin_relations))
}

fn relation_ok(cli: &Cli, r: &RelationRecord) -> bool {
    match r.status {
        RelationStatus::Pass => true,
        RelationStatus::Corrected => cli.allow_paper_typos,
        RelationStatus::Fail => false,
    }
}

fn verify(cli: &Cli, sys: &PhaseSystem) -> Result<Report, String> {
    let mut text = String::new();
    let mut pass = true;
    let mut integrals = Vec::new();
    for n in sys.integral_names() {
        let ok = is_first_integral(sys, n).map_err(|e| e.to_string())?;
        pass &= ok;
        writeln!(text, "first integral {n:<4} {}", verdict(ok)).unwrap();
        integrals.push(json!({ "name": n, "conserved": ok }));
    }
    let table = commutation_table(sys);
    let pairs = table.vanishing_pairs();
    let listed: Vec<String> = pairs.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
    writeln!(text, "vanishing brackets: {}", if listed.is_empty() { "none".into() } else { listed.join(" ") }).unwrap();

    let mut relations = Vec::new();
    match relation_table(cli, sys)? {
        Some(rels) => {
            let records = check_relations(sys, &rels).map_err(|e| e.to_string())?;
            for r in &records {
                let ok = relation_ok(cli, r);
                pass &= ok;
                let line = match r.status {
                    RelationStatus::Pass => format!("relation {:<16} pass", r.relation),
                    RelationStatus::Corrected => format!(
                        "relation {:<16} {} printed rhs is a misprint ({} residual terms); corrected rhs holds",
                        r.relation,
                        if ok { "warning:" } else { "FAIL:" },
                        r.residual_terms
                    ),
                    RelationStatus::Fail => {
                        format!("relation {:<16} FAIL residual {} terms", r.relation, r.residual_terms)
                            + &r.residual.as_ref().map(|s| format!(": {s}")).unwrap_or_default()
                    }
                };
                writeln!(text, "{line}").unwrap();
            }
            relations = records;
        }
        None => writeln!(text, "relation table: skipped (system lacks A1, A2, B1, B2, F)").unwrap(),
    }
    writeln!(text, "verify: {}", verdict(pass)).unwrap();
    let json = json!({
        "system": sys.name,
        "first_integrals": integrals,
        "vanishing_pairs": pairs,
        "relations": relations,
        "pass": pass,
    });
    Ok(Report { pass, text, json })
}

fn closure(cli: &Cli, sys: &PhaseSystem) -> Result<Report, String> {
    let report = ternary_closure(sys, cli.param_degree).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for e in &report.entries {
        let lhs = format!("{{{},{{{},{}}}}}", e.outer, e.inner.0, e.inner.1);
        if e.exact {
            writeln!(text, "{lhs} = {}", e.polynomial).unwrap();
        } else {
            writeln!(text, "{lhs}: not representable ({} residual terms)", e.residual_terms).unwrap();
        }
    }
    let pass = report.is_closed();
    writeln!(text, "closure: {}/{} exact, {}", report.entries.iter().filter(|e| e.exact).count(), report.entries.len(), verdict(pass))
        .unwrap();
    let names: Vec<&str> = report.generators.iter().map(String::as_str).collect();
    let json = json!({ "generators": names, "tables": report.to_json(&names), "closed": pass });
    Ok(Report { pass, text, json })
}

fn fit_structure(cli: &Cli, sys: &PhaseSystem, a: &str, b: &str, extra: &str) -> Result<Report, String> {
    match fit_structure_function(sys, a, b, extra, cli.param_degree, None) {
        Ok(s) => {
            let text = format!(
                "{}\nbasis {} elements, {}\n",
                s.function,
                s.basis.len(),
                if s.fit.unique { "unique" } else { "not unique" }
            );
            let terms: Vec<Value> =
                s.function.terms().map(|(m, c)| json!({ "monomial": m.to_string(), "coefficient": c.to_string() })).collect();
            let json = json!({
                "pair": [a, b], "extra": extra, "function": s.function.to_string(), "terms": terms,
                "basis_size": s.basis.len(), "unique": s.fit.unique, "exact": true,
            });
            Ok(Report { pass: true, text, json })
        }
        Err(FitError::FitInfeasible { residual_terms }) => Ok(Report {
            pass: false,
            text: format!("{{{a},{b}}}^2 is not representable over {{{a}, {b}, H, {extra}}}: {residual_terms} residual terms\n"),
            json: json!({ "pair": [a, b], "extra": extra, "exact": false, "residual_terms": residual_terms }),
        }),
        Err(e) => Err(e.to_string()),
    }
}

fn independence(cli: &Cli, sys: &PhaseSystem) -> Result<Report, String> {
    let mut names = vec!["H"];
    names.extend(sys.integral_names());
    let mut text = String::new();
    let mut ranks = Vec::new();
    let mut prefixes = vec![names.len()];
    if names.len() > MAX_RANK {
        prefixes.insert(0, MAX_RANK);
    }
    let mut pass = true;
    for k in prefixes {
        let subset = &names[..k];
        let r = generic_rank(sys, subset, cli.seed, RANK_SAMPLES).map_err(|e| e.to_string())?;
        let ok = r.max == k.min(MAX_RANK);
        pass &= ok;
        let at: Vec<String> = r.per_point.iter().map(|(p, k)| format!("{k} at {p}")).collect();
        writeln!(text, "rank {{{}}}: {} ({})", subset.join(","), at.join(", "), verdict(ok)).unwrap();
        ranks.push(json!({ "names": subset, "per_point": r.per_point, "max": r.max, "expected": k.min(MAX_RANK) }));
    }
    let dep = linear_relation_search(sys, &names, cli.param_degree).map_err(|e| e.to_string())?;
    let relation = dep.as_ref().map(|d| {
        d.names
            .iter()
            .zip(&d.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| format!("({c})*{n}"))
            .collect::<Vec<_>>()
            .join(" + ")
    });
    pass &= dep.is_none();
    match &relation {
        None => writeln!(text, "linear relation: only the trivial one (pass)").unwrap(),
        Some(r) => writeln!(text, "linear relation: {r} = 0 (FAIL)").unwrap(),
    }
    writeln!(text, "independence: {}", verdict(pass)).unwrap();
    Ok(Report { pass, text, json: json!({ "ranks": ranks, "linear_relation": relation, "pass": pass }) })
}

fn numeric_err(e: NumericError) -> Result<Report, String> {
    match e {
        NumericError::BadStep { .. } | NumericError::Csv(_) | NumericError::MissingParameter(_) => Err(e.to_string()),
        NumericError::SingularPoint { .. } => Ok(Report {
            pass: false,
            text: format!("orbit: FAIL {e}\n"),
            json: json!({ "error": e.to_string(), "pass": false }),
        }),
    }
}

fn orbit(cli: &Cli, sys: &PhaseSystem, csv: Option<&std::path::Path>) -> Result<Report, String> {
    let pt0 = PhasePoint::default_point();
    let traj = match integrate(sys, &pt0, cli.step, cli.duration) {
        Ok(t) => t,
        Err(e) => return numeric_err(e),
    };
    if let Some(path) = csv {
        let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        traj.write_csv(file).map_err(|e| e.to_string())?;
    }
    let drift = match conservation_report(sys, &traj) {
        Ok(d) => d,
        Err(e) => return numeric_err(e),
    };
    let mut names = vec!["H"];
    names.extend(sys.integral_names());
    let points = seeded_points(cli.seed, FD_POINTS);
    let mut fd = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            let probe = BracketProbe::new(sys.lookup(a).unwrap(), sys.lookup(b).unwrap());
            let mut worst = 0.0f64;
            for pt in &points {
                match probe.relative_error(pt, FD_STEP) {
                    Ok(e) => worst = worst.max(e),
                    Err(e) => return numeric_err(e),
                }
            }
            fd.push((a.to_string(), b.to_string(), worst));
        }
    }
    let drift_ok = drift.iter().all(|d| d.drift < cli.tolerance);
    let fd_ok = fd.iter().all(|(_, _, e)| *e < cli.tolerance);
    let pass = drift_ok && fd_ok;
    let mut text = format!("rk4 step {} duration {} ({} samples)\n", cli.step, cli.duration, traj.samples.len());
    for d in &drift {
        writeln!(text, "drift {:<4} {:.3e}", d.integral, d.drift).unwrap();
    }
    let worst = fd.iter().map(|(_, _, e)| *e).fold(0.0, f64::max);
    writeln!(text, "finite-difference brackets: {} pairs at {FD_POINTS} points, max relative error {worst:.3e}", fd.len())
        .unwrap();
    writeln!(text, "orbit: {}", verdict(pass)).unwrap();
    let fd_json: Vec<Value> = fd.iter().map(|(a, b, e)| json!({ "pair": [a, b], "max_error": e })).collect();
    let json = json!({
        "step": cli.step, "duration": cli.duration, "tolerance": cli.tolerance,
        "drift": drift, "finite_difference": fd_json, "pass": pass,
    });
    Ok(Report { pass, text, json })
}

fn implication_status(records: &[ImplicationRecord], name: &str) -> &'static str {
    let get = |n: &str| records.iter().find(|r| r.name == n).map(|r| r.pass);
    match (get(name), name) {
        (Some(true), _) => "pass",
        (Some(false), "c") if get("c'") == Some(true) => "paper-typo",
        _ => "fail",
    }
}

fn diff_paper(cli: &Cli, sys: &PhaseSystem) -> Result<Report, String> {
    let mut text = String::new();
    let mut unexplained = 0usize;
    let mut typos = 0usize;

    let mut structures = Vec::new();
    let mut fitted = std::collections::BTreeMap::new();
    for p in builtin_structures() {
        let fit = fit_structure_function(sys, &p.pair.0, &p.pair.1, &p.extra, cli.param_degree, None)
            .map_err(|e| format!("{}: {e}", p.name))?;
        let d = diff_structure(&p, &fit);
        writeln!(text, "== {} = F({},{},H,{}): {{{},{}}}^2 = 2 {}", p.name, p.pair.0, p.pair.1, p.extra, p.pair.0, p.pair.1, p.name)
            .unwrap();
        let w0 = d.rows.iter().map(|r| r.monomial.len()).max().unwrap_or(0).max(8);
        let w1 = d.rows.iter().map(|r| r.paper.len()).max().unwrap_or(0).max(5);
        writeln!(text, "{:<w0$}  {:>w1$}  {:<10}  status", "monomial", "PAPER", "FITTED").unwrap();
        for r in &d.rows {
            let status = match (r.status, r.flagged) {
                ("match", _) => "match",
                (_, true) => "typo",
                _ => "MISMATCH",
            };
            writeln!(text, "{:<w0$}  {:>w1$}  {:<10}  {status}", r.monomial, r.paper, r.fitted).unwrap();
        }
        typos += usize::from(!d.verbatim_matches);
        if !d.agrees_except_flagged() {
            unexplained += 1;
        }
        fitted.insert(p.name.clone(), fit.function);
        structures.push(d);
    }

    writeln!(text, "== relations").unwrap();
    let rels = builtin_relations();
    let records = check_relations(sys, &rels).map_err(|e| e.to_string())?;
    let mut relations = Vec::new();
    for (spec, r) in rels.iter().zip(&records) {
        let fitted_rhs = match r.status {
            RelationStatus::Pass => spec.rhs.clone(),
            RelationStatus::Corrected => spec.corrected.clone().unwrap_or_default(),
            RelationStatus::Fail => suggest_rhs(sys, spec, cli.param_degree).map_or_else(|e| e.to_string(), |p| p.to_string()),
        };
        match r.status {
            RelationStatus::Pass => writeln!(text, "{:<16} match  {} = {}", spec.name, spec.lhs, spec.rhs).unwrap(),
            status => {
                if status == RelationStatus::Corrected {
                    typos += 1;
                } else {
                    unexplained += 1;
                }
                let tag = if status == RelationStatus::Corrected { "typo" } else { "MISMATCH" };
                writeln!(text, "{:<16} {tag}  {}\n  PAPER  {}\n  FITTED {}", spec.name, spec.lhs, spec.rhs, fitted_rhs).unwrap();
            }
        }
        relations.push(json!({
            "relation": spec.name, "lhs": spec.lhs, "paper": spec.rhs, "fitted": fitted_rhs, "status": r.status,
        }));
    }

    writeln!(text, "== implied identities (fitted F1, F2)").unwrap();
    let implications = check_special_implications(sys, &fitted["F1"], &fitted["F2"]).map_err(|e| e.to_string())?;
    let mut imp_json = Vec::new();
    for r in &implications {
        let status = if r.name == "c'" { verdict(r.pass) } else { implication_status(&implications, &r.name) };
        match status {
            "paper-typo" => typos += 1,
            "FAIL" | "fail" => unexplained += 1,
            _ => {}
        }
        writeln!(text, "({}) {:<10} {} = 0  [{} residual terms]", r.name, status, r.identity, r.residual_terms).unwrap();
        imp_json.push(json!({ "name": r.name, "identity": r.identity, "status": status, "residual_terms": r.residual_terms }));
    }

    let pass = unexplained == 0 && (cli.allow_paper_typos || typos == 0);
    writeln!(text, "diff-paper: {typos} misprints, {unexplained} unexplained, {}", verdict(pass)).unwrap();
    let json = json!({
        "structures": structures, "relations": relations, "implications": imp_json,
        "misprints": typos, "unexplained": unexplained, "pass": pass,
    });
    Ok(Report { pass, text, json })
}
