use std::collections::BTreeSet;

use proptest::prelude::*;
use stackcalc::frontend::{
    parse_context, parse_expr, parse_formula, parse_lmu, print_context, print_expr, print_formula, print_lmu,
};
use stackcalc::generate::{ExprGen, TypedGen};
use stackcalc::lambdamu::{lmu_alpha_eq, LGen};
use stackcalc::syntax::{alpha_eq, fresh_name, var, Expr, Name, Stack};
use stackcalc::typesys::{Context, Formula};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("a")),
        Just(Formula::atom("b")),
        Just(Formula::atom("q1")),
        Just(Formula::Falsum),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| Formula::arrow(l, r)))
}

fn expr() -> impl Strategy<Value = Expr> {
    (any::<u64>(), 0usize..5).prop_map(|(seed, depth)| ExprGen::new(seed).expr(depth))
}

fn stack() -> impl Strategy<Value = Stack> {
    (any::<u64>(), 0usize..3).prop_map(|(seed, depth)| ExprGen::new(seed).stack(depth))
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn name() -> impl Strategy<Value = Name> {
    prop::sample::select(NAMES.to_vec()).prop_map(Name::new)
}

// renames the outermost binder, if any, to a fresh name
fn rename_outer(e: &Expr) -> Expr {
    use stackcalc::syntax::{mu_n, Term};
    let rename = |t: &Term| -> Term {
        match t {
            Term::Mu(a, p) => {
                let mut avoid = p.free_vars();
                avoid.insert(a.clone());
                let b = fresh_name(&avoid, &Name::new("z"));
                mu_n(b.clone(), p.subst(a, &Stack::Var(b)))
            }
            other => other.clone(),
        }
    };
    match e {
        Expr::Term(t) => Expr::Term(rename(t)),
        Expr::Process(p) => Expr::Process(stackcalc::syntax::app(rename(&p.term), p.stack.clone())),
        other => other.clone(),
    }
}

proptest! {
    #[test]
    fn expressions_round_trip(e in expr()) {
        let printed = print_expr(&e);
        let back = parse_expr(&printed).unwrap();
        prop_assert!(alpha_eq(&back, &e), "{printed}");
        prop_assert_eq!(print_expr(&back), printed);
    }

    #[test]
    fn typed_subjects_round_trip(seed in any::<u64>()) {
        let j = TypedGen::new(seed).judgement(4);
        let back = parse_expr(&print_expr(&j.subject)).unwrap();
        prop_assert!(alpha_eq(&back, &j.subject));
        let ctx = print_context(&j.context);
        prop_assert_eq!(parse_context(&ctx).unwrap(), j.context);
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        prop_assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }

    #[test]
    fn contexts_round_trip(fs in prop::collection::vec(formula(), 0..4)) {
        let ctx = Context::from_entries(fs.into_iter().enumerate().map(|(i, f)| (Name::new(&format!("v{i}")), f)));
        prop_assert_eq!(parse_context(&print_context(&ctx)).unwrap(), ctx);
    }

    #[test]
    fn lambda_mu_round_trip(seed in any::<u64>(), depth in 0usize..5) {
        let e = LGen::new(seed).expr(depth);
        let printed = print_lmu(&e);
        let back = parse_lmu(&printed).unwrap();
        prop_assert!(lmu_alpha_eq(&back, &e), "{printed}");
    }

    #[test]
    fn parse_errors_point_into_the_input(e in expr(), cut in any::<prop::sample::Index>()) {
        let printed = print_expr(&e);
        let chars: Vec<char> = printed.chars().collect();
        let i = cut.index(chars.len());
        let damaged: String = chars.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c).collect();
        if let Err(err) = parse_expr(&damaged) {
            prop_assert!(err.span.start <= err.span.end && err.span.end <= damaged.len());
        }
    }

    #[test]
    fn alpha_eq_is_an_equivalence(e in expr(), f in expr()) {
        prop_assert!(alpha_eq(&e, &e));
        prop_assert_eq!(alpha_eq(&e, &f), alpha_eq(&f, &e));
        let r = rename_outer(&e);
        prop_assert!(alpha_eq(&e, &r));
        prop_assert!(alpha_eq(&rename_outer(&r), &e));
        prop_assert_eq!(e.canonical(), r.canonical());
    }

    #[test]
    fn substitution_free_variables(e in expr(), pi in stack(), alpha in name()) {
        let out = e.subst_stack(&pi, &alpha);
        let mut bound: BTreeSet<Name> = e.free_vars();
        bound.remove(&alpha);
        if e.has_free(&alpha) {
            bound.extend(pi.free_vars());
            prop_assert_eq!(out.free_vars(), bound);
        } else {
            bound.extend(pi.free_vars());
            prop_assert!(out.free_vars().is_subset(&bound));
            prop_assert!(alpha_eq(&out, &e));
        }
    }

    #[test]
    fn substitution_respects_alpha(e in expr(), pi in stack(), alpha in name()) {
        let r = rename_outer(&e);
        prop_assert!(alpha_eq(&e.subst_stack(&pi, &alpha), &r.subst_stack(&pi, &alpha)));
    }

    #[test]
    fn substitution_lemma(e in expr(), pi in stack(), varpi in stack(), alpha in name(), beta in name()) {
        prop_assume!(alpha != beta && !varpi.has_free(&alpha));
        let left = e.subst_stack(&pi, &alpha).subst_stack(&varpi, &beta);
        let right = e.subst_stack(&varpi, &beta).subst_stack(&pi.subst(&beta, &varpi), &alpha);
        prop_assert!(alpha_eq(&left, &right), "{} vs {}", print_expr(&left), print_expr(&right));
    }
}

#[test]
fn fresh_names_take_the_smallest_suffix() {
    let avoid: BTreeSet<Name> = ["b", "b1", "b3"].into_iter().map(Name::new).collect();
    assert_eq!(fresh_name(&avoid, &Name::new("b")), Name::new("b2"));
    assert_eq!(fresh_name(&avoid, &Name::new("c")), Name::new("c"));
}

#[test]
fn substitution_avoids_capture() {
    let e = parse_expr("mu b. car(a) * b").unwrap();
    let out = e.subst_stack(&var("b"), &Name::new("a"));
    assert!(alpha_eq(&out, &parse_expr("mu c. car(b) * c").unwrap()));
}
