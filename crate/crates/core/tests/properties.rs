use std::collections::BTreeSet;

use diffinv::arith::sturm::{count_real_roots, sturm_chain};
use diffinv::arith::{refutes, Oracle, Verdict};
use diffinv::prelude::*;
use diffinv::reduce::{eq_to_conj_weak, eq_to_weak, equational_collapse, Reduction};
use diffinv::terms::{ratio, Point};
use proptest::prelude::*;

fn vars() -> [Var; 3] {
    [Var::new("x"), Var::new("y"), Var::new("z")]
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, prop_oneof![Just(1i64), Just(1), Just(2), Just(3)]).prop_map(|(n, d)| ratio(n, d))
}

fn arb_monomial(nvars: usize, degree: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=degree, nvars).prop_filter_map("degree", move |exps| {
        if exps.iter().sum::<u32>() > degree {
            return None;
        }
        Monomial::from_powers(vars().into_iter().zip(exps).filter(|(_, e)| *e > 0)).ok()
    })
}

fn arb_poly_in(nvars: usize, degree: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_monomial(nvars, degree), arb_rational()), 0..5).prop_map(Polynomial::from_terms)
}

fn arb_poly() -> impl Strategy<Value = Polynomial> {
    arb_poly_in(3, 3)
}

fn arb_rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Eq), Just(Rel::Geq), Just(Rel::Gt)]
}

fn arb_atom(nvars: usize, degree: u32) -> impl Strategy<Value = Atom> {
    (arb_poly_in(nvars, degree), arb_rel()).prop_map(|(p, r)| Atom::new(p, r))
}

fn arb_formula(nvars: usize, degree: u32) -> impl Strategy<Value = Formula> {
    arb_atom(nvars, degree).prop_map(Formula::Atom).prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn arb_point() -> impl Strategy<Value = Point> {
    prop::collection::vec(arb_rational(), 3).prop_map(|vals| vars().into_iter().zip(vals).collect())
}

fn systems() -> Vec<OdeSystem> {
    vec![
        OdeSystem::from_text(&[("x", "y"), ("y", "-x")], "true"),
        OdeSystem::from_text(&[("x", "y"), ("y", "-w^2*x - 2*d*w*y")], "w >= 0 & d >= 0"),
        OdeSystem::from_text(&[("x", "1"), ("y", "y^2")], "true"),
        OdeSystem::from_text(&[("x", "y"), ("y", "1")], "true"),
    ]
}

fn fast_oracle() -> Oracle {
    Oracle { grid_cap: 2_000, random_samples: 100, ..Oracle::default() }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn sums_are_canonical(a in arb_poly(), b in arb_poly()) {
        let s = &a + &b;
        prop_assert!(s.terms().all(|(_, c)| *c != rat(0)));
        prop_assert_eq!(&s, &(&b + &a));
        prop_assert!((&a * &b).terms().all(|(_, c)| *c != rat(0)));
    }

    #[test]
    fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!((&a + &b) + c.clone(), a.clone() + (&b + &c));
        prop_assert_eq!((&a * &b) * c.clone(), a.clone() * (&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn partial_derivatives_are_derivations(a in arb_poly(), b in arb_poly(), i in 0usize..3) {
        let v = &vars()[i];
        prop_assert_eq!((&a + &b).partial_derivative(v), a.partial_derivative(v) + b.partial_derivative(v));
        prop_assert_eq!(
            (&a * &b).partial_derivative(v),
            a.partial_derivative(v) * b.clone() + a.clone() * b.partial_derivative(v)
        );
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), p in arb_point()) {
        prop_assert_eq!((&a * &b).eval(&p).unwrap(), a.eval(&p).unwrap() * b.eval(&p).unwrap());
        prop_assert_eq!((&a + &b).eval(&p).unwrap(), a.eval(&p).unwrap() + b.eval(&p).unwrap());
    }

    #[test]
    fn printing_round_trips(f in arb_formula(3, 3)) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn negation_dualizes(a in arb_atom(3, 2)) {
        match a.negate() {
            None => prop_assert_eq!(a.rel, Rel::Eq),
            Some(n) => {
                let dual = if a.rel == Rel::Geq { Rel::Gt } else { Rel::Geq };
                prop_assert_eq!(n.rel, dual);
                prop_assert_eq!(&n.poly, &-&a.poly);
                prop_assert_eq!(n.negate().unwrap(), a.clone());
                let text = format!("!({})", Formula::Atom(a.clone()));
                prop_assert_eq!(parse_formula(&text).unwrap(), Formula::Atom(n));
            }
        }
    }

    #[test]
    fn classes_grow_under_connectives(f in arb_formula(2, 2), g in arb_formula(2, 2)) {
        let base = classify(&f).union(classify(&g));
        prop_assert!(base.union(OperatorClass::AND).is_subset_of(classify(&Formula::and(f.clone(), g.clone()))));
        prop_assert!(base.union(OperatorClass::OR).is_subset_of(classify(&Formula::or(f.clone(), g.clone()))));
    }

    #[test]
    fn open_formulas_are_strict(f in arb_formula(2, 2)) {
        if is_open(&f) {
            prop_assert!(f.atoms().iter().all(|a| a.rel == Rel::Gt));
        }
    }

    #[test]
    fn lie_derivatives_are_derivations(a in arb_poly(), b in arb_poly(), s in 0usize..4) {
        let sys = &systems()[s];
        prop_assert_eq!(lie_derivative(&(&a + &b), sys), lie_derivative(&a, sys) + lie_derivative(&b, sys));
        prop_assert_eq!(
            lie_derivative(&(&a * &b), sys),
            lie_derivative(&a, sys) * b.clone() + a.clone() * lie_derivative(&b, sys)
        );
    }

    #[test]
    fn constants_have_zero_derivative(a in arb_poly(), s in 0usize..4) {
        let sys = &systems()[s];
        let evolving: BTreeSet<Var> = sys.evolving().cloned().collect();
        let frozen = a.terms().filter(|(m, _)| m.exponents().keys().all(|v| !evolving.contains(v)));
        let p = Polynomial::from_terms(frozen.map(|(m, c)| (m.clone(), c.clone())));
        prop_assert!(lie_derivative(&p, sys).is_zero());
    }

    #[test]
    fn connectives_derive_to_conjunctions(f in arb_formula(3, 2), g in arb_formula(3, 2), s in 0usize..4) {
        let sys = &systems()[s];
        let both = Formula::and(derive_formula(&f, sys), derive_formula(&g, sys));
        prop_assert_eq!(derive_formula(&Formula::or(f.clone(), g.clone()), sys), both.clone());
        prop_assert_eq!(derive_formula(&Formula::and(f, g), sys), both);
    }

    #[test]
    fn accelerated_system_descends_lexicographically(p in arb_poly_in(2, 3)) {
        let (x, y) = (Var::new("x"), Var::new("y"));
        prop_assume!(p.degree_in(&x) > 0);
        let sys = &systems()[3];
        let d = lie_derivative(&p, sys);
        prop_assume!(!d.is_zero());
        let order = [x, y];
        let (lp, _) = p.leading_monomial_lex(&order).unwrap();
        let (ld, _) = d.leading_monomial_lex(&order).unwrap();
        prop_assert_eq!(ld.cmp_lex(&lp, &order), std::cmp::Ordering::Less);
    }

    #[test]
    fn sturm_counts_distinct_roots(roots in prop::collection::vec(arb_rational(), 1..5), lead in 1i64..4, complex in any::<bool>()) {
        let x = Var::new("x");
        let mut p = Polynomial::int(lead);
        for r in &roots {
            p = p * (Polynomial::var(x.clone()) - Polynomial::constant(r.clone()));
        }
        if complex {
            p = p * poly("x^2 + 1");
        }
        let distinct: BTreeSet<&Rational> = roots.iter().collect();
        prop_assert_eq!(count_real_roots(&sturm_chain(&p).unwrap()), distinct.len());
    }

    #[test]
    fn eliminations_are_equivalent(f in arb_formula(3, 2), pts in prop::collection::vec(arb_point(), 20)) {
        for r in [Reduction::Normalize, Reduction::Collapse, Reduction::EqToWeak, Reduction::EqToConjWeak] {
            let Ok(g) = r.apply(&f) else { continue };
            for p in &pts {
                prop_assert_eq!(f.eval(p).unwrap(), g.eval(p).unwrap(), "{} on {}", r, f);
            }
        }
    }

    #[test]
    fn reductions_account_for_degree(p in arb_poly_in(3, 2), q in arb_poly_in(3, 2), or in any::<bool>()) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let (a, b) = (Formula::Atom(Atom::eq0(p.clone())), Formula::Atom(Atom::eq0(q.clone())));
        let f = if or { Formula::or(a, b) } else { Formula::and(a, b) };
        let collapsed = equational_collapse(&f).unwrap();
        prop_assert!(collapsed.poly.total_degree() <= 2 * f.max_degree());
        let single = Atom::eq0(p.clone());
        prop_assert_eq!(eq_to_weak(&single).unwrap().poly.total_degree(), 2 * p.total_degree());
        prop_assert_eq!(eq_to_conj_weak(&single).unwrap().max_degree(), p.total_degree());
        let piped = eq_to_weak(&collapsed).unwrap();
        prop_assert!(piped.poly.total_degree() <= 4 * f.max_degree());
    }

    #[test]
    fn candidates_stay_in_class(class in prop::sample::subsequence(vec!["geq", "gt", "eq", "and", "or"], 1..5)) {
        let class = OperatorClass::parse(&class.join(",")).unwrap();
        let cfg = SearchConfig { opclass: class, max_degree: 2, budget: 300, ..SearchConfig::default() };
        let xy = [Var::new("x"), Var::new("y")];
        let first = enumerate_candidates(&xy, &cfg);
        prop_assert_eq!(&first, &enumerate_candidates(&xy, &cfg));
        for f in &first {
            prop_assert!(classify(f).is_subset_of(class));
            prop_assert!(f.atoms().iter().all(|a| !a.poly.is_constant()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn verdicts_are_sound(hyp in prop::collection::vec(arb_formula(2, 2), 0..3), goal in arb_formula(2, 2), pts in prop::collection::vec(arb_point(), 50)) {
        match fast_oracle().decide(&hyp, &goal) {
            Verdict::Invalid(w) => prop_assert!(refutes(&hyp, &goal, &w)),
            Verdict::Valid(_) => {
                for p in &pts {
                    prop_assert!(!refutes(&hyp, &goal, p), "valid {:?} ⊢ {} refuted at {:?}", hyp, goal, p);
                }
            }
            Verdict::Unknown => {}
        }
    }

    #[test]
    fn assumptions_never_break_validity(hyp in prop::collection::vec(arb_formula(2, 2), 0..2), extra in arb_formula(2, 2), goal in arb_formula(2, 2)) {
        let oracle = fast_oracle();
        if oracle.decide(&hyp, &goal).is_valid() {
            let mut more = hyp.clone();
            more.push(extra);
            prop_assert!(!oracle.decide(&more, &goal).is_invalid());
        }
    }

    #[test]
    fn open_induction_subsumes_induction(p in arb_poly_in(2, 2), q in arb_poly_in(2, 2), s in 0usize..4) {
        prop_assume!(!p.is_constant() && !q.is_constant());
        let sys = &systems()[s];
        let f = Formula::and(Formula::Atom(Atom::gt0(p)), Formula::Atom(Atom::gt0(q)));
        let goal = Problem::new(sys.clone(), f.clone(), f).sequent();
        let k = Kernel::default();
        let di = k.apply(&Rule::DiffInd, &goal).unwrap();
        if k.close_by_arith(&di[0]).is_valid() {
            let open = k.apply(&Rule::DiffIndOpen, &goal).unwrap();
            prop_assert!(!k.close_by_arith(&open[0]).is_invalid());
        }
    }

    #[test]
    fn auxiliaries_must_be_fresh(i in 0usize..3) {
        let name = ["x", "y", "c"][i];
        let sys = OdeSystem::from_text(&[("x", "-x"), ("y", "y")], "c >= 0");
        let goal = Problem::new(sys, fml("x > 0"), fml("x > 0")).sequent();
        let v = Var::new(name);
        let (_, psi) = diffinv::kernel::positivity_aux(&poly("x"), &v);
        let rule = Rule::DiffAux { var: v, rhs: poly(&format!("{name}/2")), psi, witness: None, assume_global: false };
        prop_assert!(Kernel::default().apply(&rule, &goal).is_err());
    }
}

#[test]
fn checking_is_reproducible() {
    let k = Kernel::default();
    let sys = OdeSystem::from_text(&[("x", "y"), ("y", "1")], "true");
    let f = fml("x >= 0 & y >= 0");
    let goal = Problem::new(sys, f.clone(), f).sequent();
    let script = parse_script("cut y >= 0 { invariant y >= 0 } { invariant x >= 0 & y >= 0 }").unwrap();
    let tree = script.build(&goal, &k).unwrap();
    let a = check_proof(&k, &tree).unwrap();
    let b = check_proof(&k, &tree).unwrap();
    assert_eq!(a.hash, b.hash);
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.leaves, b.leaves);
}

#[test]
fn redundant_cuts_can_be_dropped() {
    let k = Kernel::default();
    let sys = OdeSystem::from_text(&[("x", "y"), ("y", "1")], "y >= 0");
    let f = fml("x >= 0 & y >= 0");
    let goal = Problem::new(sys, f.clone(), f).sequent();
    let with_cut = parse_script("cut y >= 0 { weaken } { invariant x >= 0 & y >= 0 }").unwrap();
    let without = parse_script("invariant x >= 0 & y >= 0").unwrap();
    for s in [with_cut, without] {
        let tree = s.build(&goal, &k).unwrap();
        assert!(check_proof(&k, &tree).unwrap().verdict.is_valid(), "{s}");
    }
}
