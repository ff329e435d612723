use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use stackcalc::frontend::{parse_context, parse_formula, parse_term, print_expr, print_formula};
use stackcalc::generate::TypedGen;
use stackcalc::prover::entails;
use stackcalc::reduction::{normalize_with, one_step_reducts, NormalizeOptions, Strategy as Order};
use stackcalc::syntax::{Expr, Name};
use stackcalc::typesys::{check_term, infer_term, principal_typing, Context, Formula};

// Whether `target` is `general` with some atoms outside `fixed` replaced.
fn is_instance(general: &Formula, target: &Formula, fixed: &BTreeSet<Name>) -> bool {
    fn go(g: &Formula, t: &Formula, fixed: &BTreeSet<Name>, sub: &mut BTreeMap<Name, Formula>) -> bool {
        match (g, t) {
            (Formula::Atom(x), _) if !fixed.contains(x) => match sub.get(x) {
                Some(prev) => prev == t,
                None => {
                    sub.insert(x.clone(), t.clone());
                    true
                }
            },
            (Formula::Arrow(a, b), Formula::Arrow(c, d)) => go(a, c, fixed, sub) && go(b, d, fixed, sub),
            _ => g == t,
        }
    }
    go(general, target, fixed, &mut BTreeMap::new())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_judgements_hold(seed in any::<u64>(), depth in 0usize..6) {
        let j = TypedGen::new(seed).judgement(depth);
        prop_assert!(j.check(), "{}", print_expr(&j.subject));
    }

    #[test]
    fn reduction_preserves_judgements(seed in any::<u64>(), depth in 0usize..6) {
        let j = TypedGen::new(seed).judgement(depth);
        for step in one_step_reducts(&j.subject, true) {
            let k = j.with_subject(step.after.clone());
            prop_assert!(k.check(), "{} ->{} {}", print_expr(&j.subject), step.rule.as_str(), print_expr(&step.after));
        }
    }

    #[test]
    fn typable_expressions_normalize(seed in any::<u64>(), order in any::<u64>(), ext in any::<bool>()) {
        let j = TypedGen::new(seed).judgement(5);
        let r = normalize_with(&j.subject, &NormalizeOptions {
            extensional: ext,
            strategy: Order::Random(order),
            record_trace: false,
            ..Default::default()
        });
        prop_assert!(r.normal_form().is_some());
        prop_assert!(j.with_subject(r.normal_form().unwrap().clone()).check());
    }

    #[test]
    fn declared_types_are_instances_of_principal_ones(seed in any::<u64>()) {
        let j = TypedGen::new(seed).judgement(4);
        let p = principal_typing(&j.subject, &j.context).unwrap();
        prop_assert!(p.check());
        if let (Some(general), Some(declared)) = (&p.formula, &j.formula) {
            prop_assert!(
                is_instance(general, declared, &j.context.atoms()),
                "{} is not an instance of {}", print_formula(declared), print_formula(general)
            );
        }
    }

    #[test]
    fn typings_are_classically_sound(seed in any::<u64>()) {
        let j = TypedGen::new(seed).judgement(4);
        let hyps: Vec<Formula> = j.context.formulas().cloned().collect();
        // a term proves its type, a stack refutes it, a process is a contradiction
        let goal = match (&j.subject, &j.formula) {
            (Expr::Term(_), Some(a)) => a.clone(),
            (Expr::Stack(_), Some(a)) => Formula::neg(a.clone()),
            _ => Formula::Falsum,
        };
        prop_assert!(entails(&hyps, &goal), "{}", print_expr(&j.subject));
    }
}

#[test]
fn closed_principal_types_are_most_general() {
    for (term, instances) in [
        ("mu a. car(a) * cdr(a)", &["a -> a", "(a -> b) -> a -> b", "false -> false"][..]),
        (
            "mu a. car(a) * (mu b. car(b) * cdr(a)) :: cdr(a)",
            &["((a -> b) -> a) -> a", "((false -> a) -> false) -> false"][..],
        ),
    ] {
        let m = parse_term(term).unwrap();
        let general = infer_term(&m, &Context::new()).unwrap();
        for text in instances {
            let f = parse_formula(text).unwrap();
            assert!(check_term(&m, &f, &Context::new()), "{term} : {text}");
            assert!(is_instance(&general, &f, &BTreeSet::new()));
        }
        assert!(!check_term(&m, &parse_formula("a").unwrap(), &Context::new()));
    }
}

#[test]
fn open_principal_typing_reports_free_variables() {
    let e: Expr = parse_term("car(g)").unwrap().into();
    let j = principal_typing(&e, &parse_context("").unwrap()).unwrap();
    assert_eq!(print_formula(j.formula.as_ref().unwrap()), "x");
    assert_eq!(j.context, parse_context("g: x -> x1").unwrap());
}
