use pbkit::fitter::*;
use pbkit::genpoly::{GenMonomial, GenPoly};
use pbkit::kernel::Var;
use pbkit::scalar::int;
use pbkit::system::{builtin, PhaseSystem, NONDEGENERATE};
use pbkit::RationalForm;

fn sys() -> PhaseSystem {
    builtin(NONDEGENERATE).unwrap()
}

fn gp(text: &str) -> GenPoly {
    GenPoly::parse(text).unwrap()
}

fn to_phase(sys: &PhaseSystem, p: &GenPoly) -> RationalForm {
    p.substitute(|n| sys.lookup(n).cloned()).unwrap()
}

fn nested(sys: &PhaseSystem, outer: &str, a: &str, b: &str) -> RationalForm {
    let inner = sys.lookup(a).unwrap().poisson_bracket(sys.lookup(b).unwrap());
    sys.lookup(outer).unwrap().poisson_bracket(&inner)
}

#[test]
fn cubic_structure_function_of_a2_b2() {
    let sys = sys();
    let s = fit_structure_function(&sys, "A2", "B2", "A1", 4, None).unwrap();
    assert!(s.fit.unique);
    assert!(s.function.to_string().starts_with("-4*k1*A1^2"), "{}", s.function);
    let doubled = s.fit.to_genpoly(&s.basis);
    assert_eq!(doubled.coefficient(&GenMonomial::from_pairs([("A1".into(), 2), ("k1".into(), 1)])), int(-8));
    assert!(s.function.degree_in(&["A1", "A2", "B2", "H"]) <= 3);
    // expansion plus residual reproduces the target
    let c = sys.lookup("A2").unwrap().poisson_bracket(sys.lookup("B2").unwrap());
    assert_eq!(expand_fit(&s.basis, &s.fit).add(&s.fit.residual), c.mul(&c));
}

#[test]
fn structure_functions_satisfy_partial_derivative_identities() {
    let sys = sys();
    for (a, b, extra, cap) in [("A2", "B2", "A1", 3), ("A1", "B1", "A2", 4), ("A1", "F", "B2", 4)] {
        let s = fit_structure_function(&sys, a, b, extra, 4, None).unwrap();
        assert!(s.function.degree_in(&[a, b, "H", extra]) <= cap);
        assert_eq!(to_phase(&sys, &s.function.derivative(b)), nested(&sys, a, a, b), "{{{a},{{{a},{b}}}}}");
        assert_eq!(to_phase(&sys, &s.function.derivative(a).neg()), nested(&sys, b, a, b), "{{{b},{{{a},{b}}}}}");
    }
}

#[test]
fn commuting_pair_has_no_structure_function() {
    let err = fit_structure_function(&sys(), "A1", "A2", "B1", 4, None).unwrap_err();
    assert_eq!(err, FitError::VanishingBracket("A1".into(), "A2".into()));
}

#[test]
fn odd_momentum_parity_is_not_representable() {
    let sys = sys();
    let target = RationalForm::var(Var::X).mul(&RationalForm::var(Var::Px));
    let (_, r) = fit_quadratic_closure(&sys, &target, 2).unwrap();
    assert!(!r.is_exact());
    assert_eq!(r.residual, target);
}

#[test]
fn closure_entries_match_printed_brackets() {
    let sys = sys();
    let fit = |o, a, b| {
        let (basis, r) = fit_quadratic_closure(&sys, &nested(&sys, o, a, b), 4).unwrap();
        assert!(r.is_exact() && r.unique, "{{{o},{{{a},{b}}}}}");
        r.to_genpoly(&basis)
    };
    let f1_b1 = gp("16*H*A1^2 + 4*k^2*A1 - 8*B1*A1 - 16*A2*H*A1 + 16*H*k3*A1 - 4*A2*k^2 + 4*k^2*k3");
    assert_eq!(fit("A1", "A1", "B1"), f1_b1);
    assert!(fit("A2", "A1", "B1").is_zero());
    let b1f_b1 = gp("-64*A1*B1*H^2 + 64*A2*B1*H^2 + 64*B1*B2*H^2 + 64*B1*k3*H^2 + 128*F*k3*H^2 - 16*B1*F*H");
    assert_eq!(fit("B1", "B1", "F"), b1f_b1.neg());
}

#[test]
fn closure_is_antisymmetric_in_the_inner_pair() {
    let sys = sys();
    for (o, a, b) in [("A1", "A1", "B1"), ("B2", "A2", "F"), ("F", "B1", "B2")] {
        let (b1, r1) = fit_quadratic_closure(&sys, &nested(&sys, o, a, b), 4).unwrap();
        let (b2, r2) = fit_quadratic_closure(&sys, &nested(&sys, o, b, a), 4).unwrap();
        assert_eq!(r1.to_genpoly(&b1), r2.to_genpoly(&b2).neg());
    }
}

#[test]
fn basis_caps_shape_the_ansatz() {
    let sys = sys();
    let gens = |names: &[&str]| -> Vec<Generator> {
        names.iter().map(|n| Generator::new(n, sys.lookup(n).unwrap().clone()).unwrap()).collect()
    };
    let cubic = enumerate_basis(gens(&["A2", "B2", "H"]), Caps::new(6, 3).with_param_exponent(0), None, None).unwrap();
    let monomials: Vec<String> = cubic.elements.iter().map(|e| e.monomial(&cubic.generators).to_string()).collect();
    for m in ["A2^3", "B2^3", "A2^2*B2", "A2*B2^2", "A2^2*H", "H^3"] {
        assert!(monomials.iter().any(|x| x == m), "{m} missing");
    }
    let constants = enumerate_basis(gens(&["A1", "B1"]), Caps::new(0, 4).with_param_exponent(1), None, None).unwrap();
    assert_eq!(constants.len(), 16);
    assert!(constants.elements.iter().all(|e| e.gens.iter().all(|&x| x == 0)));

    let mut closure = gens(&["A1", "A2", "B1", "B2", "F"]);
    closure.push(Generator::new("H", sys.hamiltonian.clone()).unwrap().coefficient());
    let q = enumerate_basis(closure, Caps::new(6, 2).with_param_exponent(0), None, None).unwrap();
    let ms: Vec<String> = q.elements.iter().map(|e| e.monomial(&q.generators).to_string()).collect();
    assert!(ms.iter().any(|m| m == "A1*B1"));
    assert!(ms.iter().any(|m| m == "A1*H^2"));
}

#[test]
fn basis_guard_rejects_oversized_ansatz() {
    let sys = sys();
    let g = vec![Generator::new("A1", sys.lookup("A1").unwrap().clone()).unwrap()];
    let mut caps = Caps::new(8, 4);
    caps.max_elements = 10;
    assert!(matches!(enumerate_basis(g, caps, None, None), Err(FitError::CapTooLarge { .. })));
}

#[test]
fn integrals_are_linearly_independent() {
    let found = linear_relation_search(&sys(), &["H", "A1", "A2", "B1", "B2", "F"], 2).unwrap();
    assert_eq!(found, None);
}

#[test]
fn constructed_dependency_is_detected() {
    let mut sys = sys();
    let g = gp("2*A1 - 3*k*A2 + k1^2");
    sys.auxiliaries.push(("G".into(), to_phase(&sys, &g)));
    let dep = linear_relation_search(&sys, &["A1", "A2", "G"], 2).unwrap().expect("dependent");
    // normalized so the first coefficient is 1: A1 - (3/2) k A2 - (1/2) G + (1/2) k1^2 = 0
    let want = [gp("1"), gp("-3/2*k"), gp("-1/2"), gp("1/2*k1^2")];
    assert_eq!(dep.coefficients, want);
}
