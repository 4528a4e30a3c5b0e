use pbkit::fitter::fit_structure_function;
use pbkit::genpoly::GenPoly;
use pbkit::kernel::Var;
use pbkit::scalar::{int, ratio};
use pbkit::system::{builtin, PhaseSystem, GENERALIZED, NONDEGENERATE};
use pbkit::verifier::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sys() -> PhaseSystem {
    builtin(NONDEGENERATE).unwrap()
}

fn rel(name: &str, lhs: &str, rhs: &str) -> RelationSpec {
    RelationSpec {
        name: name.into(),
        lhs: lhs.into(),
        rhs: rhs.into(),
        corrected: None,
        source: "test".into(),
        line: 0,
    }
}

#[test]
fn all_catalog_integrals_are_conserved() {
    let sys = sys();
    for n in ["A1", "A2", "B1", "B2", "F"] {
        assert!(is_first_integral(&sys, n).unwrap(), "{n}");
    }
    let g = builtin(GENERALIZED).unwrap();
    for n in ["A1", "A2", "B2"] {
        assert!(is_first_integral(&g, n).unwrap(), "{n}");
    }
}

#[test]
fn commutation_pattern() {
    let t = commutation_table(&sys());
    assert!(t.is_symmetric());
    let want = [("A1", "A2"), ("A1", "B2"), ("A2", "B1"), ("B2", "F")];
    let got = t.vanishing_pairs();
    assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));
    assert_eq!(t.vanishes("B1", "F"), Some(false));
    assert_eq!(t.vanishes("A1", "B1"), Some(false));
}

#[test]
fn single_relations() {
    let sys = sys();
    let a1c1 = rel(
        "A1-C1",
        "{A1,{A1,B1}}",
        "16*H*A1^2 + 4*k^2*A1 - 8*A1*B1 - 16*A2*H*A1 + 16*H*k3*A1 - 4*A2*k^2 + 4*k^2*k3",
    );
    assert_eq!(check_relation(&sys, &a1c1).unwrap().status, RelationStatus::Pass);
    assert!(check_relation(&sys, &rel("c", "{{A1,B1},A2}", "0")).unwrap().holds());

    let mut bumped = a1c1.clone();
    bumped.rhs.push_str(" + 1");
    let r = check_relation(&sys, &bumped).unwrap();
    assert_eq!(r.status, RelationStatus::Fail);
    assert_eq!(r.residual.as_deref(), Some("-1"));
}

#[test]
fn relation_errors_carry_context() {
    let err = check_relation(&sys(), &rel("bad", "{A1,M}", "0")).unwrap_err();
    assert!(matches!(err, VerifyError::Dsl { ref relation, .. } if relation == "bad"), "{err}");
    let err = parse_relations("name: x\nlhs: {A1,A2}\nrhs: 0\nextra: 1\n").unwrap_err();
    assert!(matches!(err, VerifyError::Format { line: 4, .. }));
}

#[test]
fn shipped_relation_table_holds_with_reported_corrections() {
    let records = check_relations(&sys(), &builtin_relations()).unwrap();
    assert_eq!(records.len(), 29);
    assert!(records.iter().all(RelationRecord::holds));
    let corrected: Vec<&str> =
        records.iter().filter(|r| r.status == RelationStatus::Corrected).map(|r| r.relation.as_str()).collect();
    assert_eq!(corrected, ["B1-FA1", "A2-FA2"]);
    let json = serde_json::to_value(&records[0]).unwrap();
    for key in ["relation", "status", "residual_terms", "source"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["status"], "pass");
}

#[test]
fn stored_corrections_are_the_fitted_right_hand_sides() {
    let sys = sys();
    for r in builtin_relations().iter().filter(|r| r.corrected.is_some()) {
        let stored = GenPoly::parse(r.corrected.as_deref().unwrap()).unwrap();
        assert_eq!(suggest_rhs(&sys, r, 4).unwrap(), stored, "{}", r.name);
    }
}

#[test]
fn printed_structure_functions_agree_except_flagged_terms() {
    let sys = sys();
    for p in builtin_structures() {
        let fit = fit_structure_function(&sys, &p.pair.0, &p.pair.1, &p.extra, 4, None).unwrap();
        let d = diff_structure(&p, &fit);
        assert!(d.agrees_except_flagged(), "{}: {:?}", p.name, d.rows);
        assert_eq!(d.verbatim_matches, p.suspects.is_empty(), "{}", p.name);
        let flagged = d.rows.iter().filter(|r| r.flagged && r.status != "match").count();
        assert!(flagged >= p.suspects.len(), "{}", p.name);
    }
}

#[test]
fn special_implications() {
    let sys = sys();
    let f1 = fit_structure_function(&sys, "A1", "B1", "A2", 4, None).unwrap().function;
    let f2 = fit_structure_function(&sys, "A2", "B2", "A1", 4, None).unwrap().function;
    let records = check_special_implications(&sys, &f1, &f2).unwrap();
    let pass = |n: &str| records.iter().find(|r| r.name == n).unwrap().pass;
    assert!(pass("a") && pass("b"));
    // the printed third identity has the sign of its first term flipped
    assert!(!pass("c"));
    assert!(pass("c'"));

    let brackets = DerivedBrackets::new(&sys).unwrap();
    let minus_d = brackets.d.neg();
    let mutated = check_special_implications_with(&sys, &f1, &f2, &brackets, &minus_d).unwrap();
    assert!(!mutated.iter().find(|r| r.name == "a").unwrap().pass);
}

#[test]
fn jacobian_ranks() {
    let sys = sys();
    let five = generic_rank(&sys, &["H", "A1", "A2", "B1", "B2"], 7, 2).unwrap();
    assert!(five.per_point.iter().all(|(_, r)| *r == 5), "{five:?}");
    let six = generic_rank(&sys, &["H", "A1", "A2", "B1", "B2", "F"], 7, 2).unwrap();
    assert!(six.per_point.iter().all(|(_, r)| *r == 5), "{six:?}");
    assert_eq!(generic_rank(&sys, &["H"], 7, 1).unwrap().max, 1);
}

#[test]
fn rank_is_invariant_under_momentum_rescaling() {
    let sys = sys();
    let names = ["H", "A1", "A2", "B1", "B2", "F"];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for pos in RATIONAL_POINTS {
        let pt = sample_point(pos, &mut rng);
        let mut scaled = pt.clone();
        for v in [Var::Px, Var::Py, Var::Pz] {
            scaled.set(v, pt.get(v) * ratio(-7, 3));
        }
        assert_eq!(jacobian_rank(&sys, &names, &pt).unwrap(), jacobian_rank(&sys, &names, &scaled).unwrap());
    }
}

#[test]
fn rank_rejects_inconsistent_radical() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pt = sample_point((1, 2, 2, 3), &mut rng);
    pt.set(Var::R, int(4));
    assert!(jacobian_rank(&sys(), &["H"], &pt).is_err());
}
