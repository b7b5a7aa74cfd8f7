mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Duration;

use proptest::prelude::*;
use proptest::sample::Index;

use common::Oracle;
use rlattice::checker::{check, enumerate_relations, holds_under};
use rlattice::model::{find_counterexample, model_from_universe, search_model, verify_model, FiniteModel, SearchOptions, SearchOutcome};
use rlattice::suites::minimal_axioms;
use rlattice::{Assignment, Atom, BinOp, ConstantKind, Mode, Relation, Relationship, Statement, Term, Universe, Verdict};

/// 1 to 3 attributes with domains of 1 or 2 values.
fn arb_universe() -> impl Strategy<Value = (Universe, Vec<Relation>)> {
    prop::collection::vec(1usize..=2, 1..=3).prop_map(|sizes| {
        let text: Vec<String> = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| format!("a{i} : {}", (0..n).map(|v| format!("v{v}")).collect::<Vec<_>>().join(", ")))
            .collect();
        let u = Universe::parse(&text.join("\n")).unwrap();
        let rels = enumerate_relations(&u).unwrap();
        (u, rels)
    })
}

fn pick<'a>(rels: &'a [Relation], i: &Index) -> &'a Relation {
    &rels[i.index(rels.len())]
}

fn arb_term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vars.to_vec()).prop_map(Term::var),
        1 => prop::sample::select(ConstantKind::ALL.to_vec()).prop_map(Term::Const),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            1 => inner.clone().prop_map(Term::complement),
            4 => (prop::sample::select(BinOp::ALL.to_vec()), inner.clone(), inner).prop_map(|(op, l, r)| Term::binary(op, l, r)),
        ]
    })
}

fn arb_statement() -> impl Strategy<Value = Statement> {
    let vars: &'static [&'static str] = &["x", "y", "z"];
    let rel = prop::sample::select(vec![Relationship::Equal, Relationship::Equal, Relationship::Below, Relationship::NotEqual]);
    prop_oneof![
        3 => (rel.clone(), arb_term(vars), arb_term(vars)).prop_map(|(r, l, rh)| Statement::Atom(Atom::new(r, l, rh))),
        1 => (arb_term(vars), arb_term(vars), rel, arb_term(vars), arb_term(vars)).prop_map(|(a, b, r, c, d)| {
            Statement::Implication { premises: vec![Atom::new(Relationship::Below, a, b)], conclusion: Atom::new(r, c, d) }
        }),
    ]
}

/// Terms over `^`, `v`, `'` and the two base constants: the model signature.
fn arb_model_statement() -> impl Strategy<Value = Statement> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["x", "y"]).prop_map(Term::var),
        1 => prop::sample::select(vec![ConstantKind::R00, ConstantKind::R11]).prop_map(Term::Const),
    ];
    let term = leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            1 => inner.clone().prop_map(Term::complement),
            3 => (prop::sample::select(vec![BinOp::Meet, BinOp::Join]), inner.clone(), inner).prop_map(|(op, l, r)| Term::binary(op, l, r)),
        ]
    });
    (term.clone(), term).prop_map(|(l, r)| Statement::Atom(Atom::new(Relationship::Equal, l, r)))
}

fn oracle_of(u: &Universe) -> Oracle {
    Oracle {
        domains: u.attributes().iter().enumerate().map(|(i, a)| (a.clone(), u.domain(i).to_vec())).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn headers_follow_the_operations((u, rels) in arb_universe(), i in any::<Index>(), j in any::<Index>()) {
        let (r, s) = (pick(&rels, &i), pick(&rels, &j));
        let (hr, hs) = (r.header(), s.header());
        prop_assert_eq!(u.natural_join(r, s).unwrap().header(), hr.union(hs));
        prop_assert_eq!(u.inner_union(r, s).unwrap().header(), hr.intersection(hs));
        prop_assert_eq!(u.outer_union(r, s).unwrap().header(), hr.union(hs));
        prop_assert_eq!(u.inner_join(r, s).unwrap().header(), hr.intersection(hs));
        prop_assert_eq!(u.complement(r).unwrap().header(), hr);
    }

    #[test]
    fn operations_agree_with_naive_definitions((u, rels) in arb_universe(), i in any::<Index>(), j in any::<Index>()) {
        let o = oracle_of(&u);
        let (r, s) = (pick(&rels, &i), pick(&rels, &j));
        let (or, os) = (o.lift(&u, r), o.lift(&u, s));
        for op in BinOp::ALL {
            prop_assert_eq!(o.lift(&u, &u.apply(op, r, s).unwrap()), o.apply(op, &or, &os), "{}", op);
        }
        prop_assert_eq!(o.lift(&u, &u.complement(r).unwrap()), o.complement(&or));
    }

    #[test]
    fn lattice_laws((u, rels) in arb_universe(), i in any::<Index>(), j in any::<Index>(), k in any::<Index>()) {
        let (x, y, z) = (pick(&rels, &i), pick(&rels, &j), pick(&rels, &k));
        let m = |a: &Relation, b: &Relation| u.natural_join(a, b).unwrap();
        let j = |a: &Relation, b: &Relation| u.inner_union(a, b).unwrap();
        prop_assert_eq!(m(x, y), m(y, x));
        prop_assert_eq!(j(x, y), j(y, x));
        prop_assert_eq!(m(&m(x, y), z), m(x, &m(y, z)));
        prop_assert_eq!(j(&j(x, y), z), j(x, &j(y, z)));
        prop_assert_eq!(&m(x, x), x);
        prop_assert_eq!(&j(x, x), x);
        prop_assert_eq!(&m(x, &j(x, y)), x);
        prop_assert_eq!(&j(x, &m(x, y)), x);
    }

    #[test]
    fn pointwise_and_pointfree_definitions_agree((u, rels) in arb_universe(), i in any::<Index>(), j in any::<Index>()) {
        let (r, s) = (pick(&rels, &i), pick(&rels, &j));
        prop_assert_eq!(u.inner_join(r, s).unwrap(), u.inner_join_pointfree(r, s).unwrap());
        prop_assert_eq!(u.outer_union(r, s).unwrap(), u.outer_union_pointfree(r, s).unwrap());
    }

    #[test]
    fn complement_fdi_and_constants((u, rels) in arb_universe(), i in any::<Index>()) {
        let x = pick(&rels, &i);
        let c = |k| u.constant(k).unwrap();
        let xc = u.complement(x).unwrap();
        prop_assert_eq!(u.natural_join(&xc, x).unwrap(), u.natural_join(x, &c(ConstantKind::R00)).unwrap());
        prop_assert_eq!(u.inner_union(&xc, x).unwrap(), u.inner_union(x, &c(ConstantKind::R11)).unwrap());
        prop_assert_eq!(&u.complement(&xc).unwrap(), x);

        let head = u.natural_join(x, &c(ConstantKind::R00)).unwrap();
        let content = u.natural_join(x, &c(ConstantKind::R11)).unwrap();
        prop_assert_eq!(&u.inner_union(&head, &content).unwrap(), x);
        let a = u.outer_union(x, &c(ConstantKind::R01)).unwrap();
        let b = u.outer_union(x, &c(ConstantKind::R10)).unwrap();
        prop_assert_eq!(&u.inner_join(&a, &b).unwrap(), x);

        prop_assert_eq!(u.natural_join(x, &c(ConstantKind::R10)).unwrap(), c(ConstantKind::R10));
        prop_assert_eq!(u.inner_union(x, &c(ConstantKind::R01)).unwrap(), c(ConstantKind::R01));
        prop_assert_eq!(u.inner_join(x, &c(ConstantKind::R00)).unwrap(), c(ConstantKind::R00));
        prop_assert_eq!(u.outer_union(x, &c(ConstantKind::R11)).unwrap(), c(ConstantKind::R11));
    }

    #[test]
    fn leq_is_a_partial_order((u, rels) in arb_universe(), i in any::<Index>(), j in any::<Index>(), k in any::<Index>()) {
        let (x, y, z) = (pick(&rels, &i), pick(&rels, &j), pick(&rels, &k));
        let le = |a, b| u.leq(a, b).unwrap();
        prop_assert!(le(x, x));
        if le(x, y) && le(y, x) {
            prop_assert_eq!(x, y);
        }
        if le(x, y) && le(y, z) {
            prop_assert!(le(x, z));
        }
    }

    #[test]
    fn cylindrification_laws((u, rels) in arb_universe(), i in any::<Index>(), j in any::<Index>(), k in any::<Index>()) {
        let (x, y, z) = (pick(&rels, &i), pick(&rels, &j), pick(&rels, &k));
        let cy = |a: &Relation, b: &Relation| u.cylindrify(a, b).unwrap();
        prop_assert_eq!(cy(x, y), cy(y, x));
        prop_assert_eq!(cy(x, &cy(y, z)), cy(&cy(x, y), z));
        prop_assert_eq!(cy(z, &u.outer_union(x, y).unwrap()), u.outer_union(&cy(z, x), &cy(z, y)).unwrap());
        prop_assert_eq!(cy(z, &u.natural_join(x, y).unwrap()), u.natural_join(&cy(z, x), &cy(z, y)).unwrap());
        prop_assert_eq!(cy(z, &u.inner_union(x, y).unwrap()), u.inner_union(&cy(z, x), &cy(z, y)).unwrap());
        prop_assert_eq!(cy(&cy(x, x), x), cy(x, x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_witnesses_are_exhaustive_refutations(s in arb_statement(), seed in any::<u64>()) {
        let u = common::u1();
        let sampled = check(&u, &s, Mode::Sample { seed, samples: 300 }).unwrap();
        prop_assert_ne!(sampled.verdict, Verdict::Holds);
        if let Some(w) = &sampled.witness {
            prop_assert!(!holds_under(&u, &s, w).unwrap());
            prop_assert_eq!(check(&u, &s, Mode::Exhaustive).unwrap().verdict, Verdict::Refuted);
        }
    }

    #[test]
    fn exhaustive_reports_are_deterministic_and_complete(s in arb_statement()) {
        let u = common::u1();
        let a = check(&u, &s, Mode::Exhaustive).unwrap();
        let b = check(&u, &s, Mode::Exhaustive).unwrap();
        prop_assert_eq!(a.to_json(&u, false), b.to_json(&u, false));
        prop_assert_eq!(&a.witness, &b.witness);
        let k = s.free_variables().len() as u32;
        if a.verdict == Verdict::Holds {
            prop_assert_eq!(a.assignments_tested, 6u64.pow(k));
        }
    }

    #[test]
    fn checker_agrees_with_the_oracle(s in arb_statement()) {
        let u = common::u1();
        let o = Oracle::u1();
        let all = o.all_relations();
        let vars = s.free_variables();
        let mut refuted_by_oracle = false;
        let mut idx = vec![0usize; vars.len()];
        'outer: loop {
            let env: BTreeMap<String, common::Rel> = vars.iter().cloned().zip(idx.iter().map(|&i| all[i].clone())).collect();
            if !o.holds(&s, &env) {
                refuted_by_oracle = true;
                break;
            }
            for d in idx.iter_mut() {
                *d += 1;
                if *d < all.len() {
                    continue 'outer;
                }
                *d = 0;
            }
            break;
        }
        let report = check(&u, &s, Mode::Exhaustive).unwrap();
        prop_assert_eq!(report.verdict == Verdict::Refuted, refuted_by_oracle);
        if let Some(w) = &report.witness {
            let env: BTreeMap<String, common::Rel> = w.iter().map(|(v, r)| (v.clone(), o.lift(&u, r))).collect();
            prop_assert!(!o.holds(&s, &env));
        }
    }

    #[test]
    fn bridge_is_sound(s in arb_statement()) {
        for u in [common::u1(), common::u2()] {
            let m = model_from_universe(&u).unwrap();
            let concrete = check(&u, &s, Mode::Exhaustive).unwrap().verdict;
            let abstract_ = verify_model(&m, std::slice::from_ref(&s)).unwrap()[0].verdict;
            prop_assert_eq!(concrete, abstract_);
        }
    }

    #[test]
    fn relabeling_preserves_verdicts(s in arb_statement(), seed in any::<u64>()) {
        let u = common::u1();
        let m = model_from_universe(&u).unwrap();
        let mut mapping: Vec<usize> = (0..m.size()).collect();
        let mut state = seed;
        for i in (1..mapping.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            mapping.swap(i, (state >> 33) as usize % (i + 1));
        }
        let r = m.relabel(&mapping).unwrap();
        prop_assert_eq!(
            find_counterexample(&m, &s).unwrap().is_some(),
            find_counterexample(&r, &s).unwrap().is_some()
        );
    }
}

/// Every model of the twelve axioms of size 1 or 2, found by brute force.
fn small_axiom_models() -> &'static [FiniteModel] {
    static MODELS: OnceLock<Vec<FiniteModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        let axioms = minimal_axioms();
        all_small_structures()
            .into_iter()
            .filter(|m| verify_model(m, &axioms).unwrap().iter().all(|v| v.verdict == Verdict::Holds))
            .collect()
    })
}

fn all_small_structures() -> Vec<FiniteModel> {
    let mut out = Vec::new();
    for n in 1..=2usize {
        let cells = n * n;
        let tables: Vec<Vec<usize>> = (0..n.pow(cells as u32))
            .map(|mut code| (0..cells).map(|_| { let v = code % n; code /= n; v }).collect())
            .collect();
        let comps: Vec<Vec<usize>> = (0..n.pow(n as u32))
            .map(|mut code| (0..n).map(|_| { let v = code % n; code /= n; v }).collect())
            .collect();
        for meet in &tables {
            for join in &tables {
                for comp in &comps {
                    for r00 in 0..n {
                        for r11 in 0..n {
                            out.push(FiniteModel::new(n, meet.clone(), join.clone(), comp.clone(), r00, r11).unwrap());
                        }
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_is_sound_and_complete_on_small_sizes(goal in arb_model_statement()) {
        let axioms = minimal_axioms();
        let opts = SearchOptions::new(1..=2, Duration::from_secs(60));
        let outcome = search_model(&axioms, std::slice::from_ref(&goal), &opts).unwrap();
        let brute: Option<usize> = small_axiom_models()
            .iter()
            .filter(|m| find_counterexample(m, &goal).unwrap().is_some())
            .map(|m| m.size())
            .min();
        match outcome {
            SearchOutcome::Found { model, .. } => {
                prop_assert!(verify_model(&model, &axioms).unwrap().iter().all(|v| v.verdict == Verdict::Holds));
                prop_assert!(find_counterexample(&model, &goal).unwrap().is_some());
                prop_assert_eq!(Some(model.size()), brute);
            }
            SearchOutcome::Exhausted { excluded, .. } => {
                prop_assert_eq!(excluded, vec![1, 2]);
                prop_assert_eq!(brute, None);
            }
        }
    }
}

#[test]
fn witnesses_are_assignments_of_enumerated_relations() {
    let u = common::u2();
    let rels = enumerate_relations(&u).unwrap();
    let s = rlattice::parse_goal("x + (x * y) = x").unwrap();
    let r = check(&u, &s, Mode::Exhaustive).unwrap();
    let w: &Assignment = r.witness.as_ref().unwrap();
    assert!(w.iter().all(|(_, rel)| rels.contains(rel)));
}
