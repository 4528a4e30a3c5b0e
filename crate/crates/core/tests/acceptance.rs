//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use pbkit::dsl::{lower, parse};
use pbkit::fitter::{fit_structure_function, linear_relation_search, structure_degree_cap, ternary_closure, Caps};
use pbkit::kernel::Var;
use pbkit::numeric::{conservation_report, integrate, seeded_points, BracketProbe, PhasePoint, DEFAULT_SEED};
use pbkit::scalar::int;
use pbkit::system::{builtin, specialize, PhaseSystem, NONDEGENERATE};
use pbkit::verifier::*;
use pbkit::RationalForm;

const FIRST_INTEGRAL_BUDGET: Duration = Duration::from_secs(60);
const CLOSURE_BUDGET: Duration = Duration::from_secs(600);
const PARAM_EXPONENT: u32 = Caps::DEFAULT_PARAM_EXPONENT;
const RANK_SEED: u64 = 7;
const RANK_SAMPLES: usize = 2;
const FD_STEP: f64 = 1e-5;
const FD_POINTS: usize = 10;
const FD_TOLERANCE: f64 = 1e-6;
const DRIFT_STEP: f64 = 1e-3;
const DRIFT_DURATION: f64 = 10.0;
const DRIFT_TOLERANCE: f64 = 1e-6;
const HALVING_FACTOR: (f64, f64) = (8.0, 32.0);

const INTEGRALS: [&str; 5] = ["A1", "A2", "B1", "B2", "F"];
const SIX: [&str; 6] = ["H", "A1", "A2", "B1", "B2", "F"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn first_integrals(sys: &PhaseSystem) -> Outcome {
    let t = Instant::now();
    let failing: Vec<&str> = INTEGRALS.iter().copied().filter(|n| !is_first_integral(sys, n).unwrap()).collect();
    let elapsed = t.elapsed();
    let pass = failing.is_empty() && elapsed < FIRST_INTEGRAL_BUDGET;
    outcome(pass, format!("{{H,S}} = 0 for {}/5 integrals in {elapsed:.2?}; failing {failing:?}", 5 - failing.len()))
}

fn pi_structure(sys: &PhaseSystem) -> Outcome {
    let t = commutation_table(sys);
    let pairs = t.vanishing_pairs();
    let has = |a: &str, b: &str| pairs.iter().any(|(x, y)| x == a && y == b);
    let fixed = has("A1", "A2") && has("A1", "B2") && has("A2", "B1");
    let b2f = has("B2", "F");
    let b1f = has("B1", "F");
    let pass = t.is_symmetric() && pairs.len() == 4 && fixed && (b2f != b1f);
    let which = if b2f { "{B2,F} = 0" } else if b1f { "{B1,F} = 0" } else { "neither" };
    outcome(pass, format!("vanishing pairs {pairs:?}; resolved: {which}"))
}

fn structure_functions(sys: &PhaseSystem) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in builtin_structures() {
        let fit = match fit_structure_function(sys, &p.pair.0, &p.pair.1, &p.extra, PARAM_EXPONENT, None) {
            Ok(f) => f,
            Err(e) => {
                pass = false;
                notes.push(format!("{}: {e}", p.name));
                continue;
            }
        };
        let da = sys.degree_of(&p.pair.0).unwrap();
        let db = sys.degree_of(&p.pair.1).unwrap();
        let cap = structure_degree_cap(da, db);
        let names = [p.pair.0.as_str(), p.pair.1.as_str(), "H", p.extra.as_str()];
        let d = diff_structure(&p, &fit);
        let ok = fit.fit.is_exact() && fit.function.degree_in(&names) <= cap && d.agrees_except_flagged();
        pass &= ok;
        let flagged = d.rows.iter().filter(|r| r.flagged && r.status != "match").count();
        notes.push(format!(
            "{} degree {} exact={} verbatim={} flagged rows {flagged} unexplained {}",
            p.name,
            fit.function.degree_in(&names),
            fit.fit.is_exact(),
            d.verbatim_matches,
            d.unexplained
        ));
    }
    outcome(pass, notes.join("; "))
}

fn relation_table(sys: &PhaseSystem) -> Outcome {
    let records = check_relations(sys, &builtin_relations()).unwrap();
    let failed: Vec<&str> = records.iter().filter(|r| !r.holds()).map(|r| r.relation.as_str()).collect();
    let corrected: Vec<&str> =
        records.iter().filter(|r| r.status == RelationStatus::Corrected).map(|r| r.relation.as_str()).collect();
    outcome(
        failed.is_empty(),
        format!(
            "{} relations: {} verbatim, corrected {corrected:?}, unexplained {failed:?}",
            records.len(),
            records.iter().filter(|r| r.status == RelationStatus::Pass).count()
        ),
    )
}

fn closure(sys: &PhaseSystem) -> Outcome {
    let t = Instant::now();
    let report = ternary_closure(sys, PARAM_EXPONENT).unwrap();
    let elapsed = t.elapsed();
    let exact = report.entries.iter().filter(|e| e.exact).count();
    let pass = report.entries.len() == 50 && report.is_closed() && elapsed < CLOSURE_BUDGET;
    outcome(pass, format!("{exact}/{} nested brackets fit exactly in {elapsed:.2?}", report.entries.len()))
}

fn special_implications(sys: &PhaseSystem) -> Outcome {
    let f1 = fit_structure_function(sys, "A1", "B1", "A2", PARAM_EXPONENT, None).unwrap().function;
    let f2 = fit_structure_function(sys, "A2", "B2", "A1", PARAM_EXPONENT, None).unwrap().function;
    let records = check_special_implications(sys, &f1, &f2).unwrap();
    let get = |n: &str| records.iter().find(|r| r.name == n).unwrap();
    let pass = ["a", "b", "c"].iter().all(|n| get(n).pass);
    let summary: Vec<String> = records
        .iter()
        .map(|r| if r.pass { format!("({}) holds", r.name) } else { format!("({}) residual {} terms", r.name, r.residual_terms) })
        .collect();
    outcome(pass, summary.join(", "))
}

fn five_to_six(sys: &PhaseSystem) -> Outcome {
    let five = generic_rank(sys, &SIX[..5], RANK_SEED, RANK_SAMPLES).unwrap();
    let six = generic_rank(sys, &SIX, RANK_SEED, RANK_SAMPLES).unwrap();
    let dependence = linear_relation_search(sys, &SIX, PARAM_EXPONENT).unwrap();
    let pass = five.per_point.iter().all(|(_, r)| *r == 5)
        && six.per_point.iter().all(|(_, r)| *r == 5)
        && dependence.is_none();
    let ranks = |r: &RankReport| r.per_point.iter().map(|(_, k)| k.to_string()).collect::<Vec<_>>().join("/");
    outcome(
        pass,
        format!(
            "rank of five {} and of six {} at the three points; linear relation: {}",
            ranks(&five),
            ranks(&six),
            if dependence.is_none() { "only trivial" } else { "found" }
        ),
    )
}

fn degenerate(sys: &PhaseSystem) -> Outcome {
    let g = specialize(sys, &[("k3", int(0))]).unwrap();
    let printed =
        lower(&parse("(px^2+py^2+pz^2)/2 - k/sqrt(x^2+y^2+z^2) + k1/x^2 + k2/y^2").unwrap(), &g.params).unwrap();
    let same = g.hamiltonian == printed;
    let conserved: Vec<bool> = ["A1", "A2", "B2"].iter().map(|n| is_first_integral(&g, n).unwrap()).collect();
    outcome(same && conserved.iter().all(|&c| c), format!("H matches: {same}; A1, A2, B2 conserved: {conserved:?}"))
}

fn numeric(sys: &PhaseSystem) -> Outcome {
    let points = seeded_points(DEFAULT_SEED, FD_POINTS);
    let mut worst = 0.0f64;
    for (i, a) in SIX.iter().enumerate() {
        for b in &SIX[i + 1..] {
            let probe = BracketProbe::new(sys.lookup(a).unwrap(), sys.lookup(b).unwrap());
            for pt in &points {
                worst = worst.max(probe.relative_error(pt, FD_STEP).unwrap());
            }
        }
    }
    let pt0 = PhasePoint::default_point();
    let run = |step| conservation_report(sys, &integrate(sys, &pt0, step, DRIFT_DURATION).unwrap()).unwrap();
    let coarse = run(DRIFT_STEP);
    let fine = run(DRIFT_STEP / 2.0);
    let max_drift = coarse.iter().map(|d| d.drift).fold(0.0, f64::max);
    let factor = coarse[0].drift / fine[0].drift;
    let fd_ok = worst < FD_TOLERANCE;
    let drift_ok = max_drift < DRIFT_TOLERANCE;
    let order_ok = (HALVING_FACTOR.0..=HALVING_FACTOR.1).contains(&factor);
    outcome(
        fd_ok && drift_ok && order_ok,
        format!(
            "fd max rel error {worst:.1e} (<{FD_TOLERANCE:e}: {fd_ok}); max drift {max_drift:.1e} (<{DRIFT_TOLERANCE:e}: {drift_ok}); \
             H drift {:.2e} -> {:.2e} on halving, factor {factor:.2} (in [{}, {}]: {order_ok})",
            coarse[0].drift, fine[0].drift, HALVING_FACTOR.0, HALVING_FACTOR.1
        ),
    )
}

fn jacobi(f: &RationalForm, g: &RationalForm, h: &RationalForm) -> bool {
    f.poisson_bracket(&g.poisson_bracket(h))
        .add(&g.poisson_bracket(&h.poisson_bracket(f)))
        .add(&h.poisson_bracket(&f.poisson_bracket(g)))
        .is_zero()
}

fn kernel_properties(sys: &PhaseSystem) -> Outcome {
    let get = |n: &str| sys.lookup(n).unwrap();
    let forms = sys.named_forms();
    let antisym = forms.iter().enumerate().all(|(i, (_, f))| {
        forms[i..].iter().all(|(_, g)| f.poisson_bracket(g).add(&g.poisson_bracket(f)).is_zero())
    });
    let leibniz = [("H", "A1", "B2"), ("A1", "A2", "B2"), ("B2", "A2", "J1")].iter().all(|&(f, g, h)| {
        let (f, g, h) = (get(f), get(g), get(h));
        f.poisson_bracket(&g.mul(h)).sub(&g.mul(&f.poisson_bracket(h))).sub(&f.poisson_bracket(g).mul(h)).is_zero()
    });
    let four = ["H", "A1", "A2", "B2"];
    let mut triples = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in j + 1..4 {
                triples.push((four[i], four[j], four[k]));
            }
        }
    }
    triples.push(("A1", "B1", "B2"));
    let jac = triples.iter().all(|&(f, g, h)| jacobi(get(f), get(g), get(h)));
    let round_trip = forms.iter().all(|(_, f)| lower(&parse(&f.to_string()).unwrap(), &sys.params).unwrap() == **f);
    outcome(
        antisym && leibniz && jac && round_trip,
        format!(
            "antisymmetry {antisym}, Leibniz {leibniz}, Jacobi over {} triples {jac}, round trip of {} expressions {round_trip}",
            triples.len(),
            forms.len()
        ),
    )
}

type Criterion = (&'static str, fn(&PhaseSystem) -> Outcome);

fn main() {
    let sys = builtin(NONDEGENERATE).expect("built-in catalog");
    debug_assert!(sys.params == Var::PARAMS);
    let criteria: [Criterion; 10] = [
        ("first integrals", first_integrals),
        ("pi-structure", pi_structure),
        ("structure functions", structure_functions),
        ("relation table", relation_table),
        ("ternary closure", closure),
        ("special implications", special_implications),
        ("five-to-six instance", five_to_six),
        ("degenerate specialization", degenerate),
        ("numeric cross-check", numeric),
        ("kernel properties", kernel_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check(&sys);
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {:<26} {}  ({:.1?}) {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed(),
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
