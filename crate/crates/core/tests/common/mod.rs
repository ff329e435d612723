//! Seeded corpora shared by the property suites and the acceptance target.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stackcalc::frontend::print_process;
use stackcalc::generate::{random_formula, ExprGen, TypedGen};
use stackcalc::lambdamu::{
    lmu_one_step, lmu_principal, translate, translate_with, translated_judgement_context, LExpr, LGen, LRule, LTyping,
    Naming, TranslateOptions,
};
use stackcalc::machine::{
    label_term, raise_term, readback, readback_stack, readback_term, resume_term, run, try_catch_term, MachineState,
};
use stackcalc::prover::{decide, ProofResult};
use stackcalc::reduction::{project_normalize, reaches};
use stackcalc::syntax::{
    alpha_eq_process, alpha_eq_stack, alpha_eq_term, app, car, cdr, cons, mu, nil, var, Expr, Name, Process, Stack,
    Term,
};
use stackcalc::typesys::Judgement;

/// One λμ step: rule, source, target.
pub type LReduction = (LRule, LExpr, LExpr);

/// `per_rule` one-step reductions for each of the six rules.
pub fn lmu_reductions(seed: u64, per_rule: usize) -> Vec<LReduction> {
    let mut g = LGen::new(seed);
    let mut out = Vec::new();
    for rule in LRule::ALL {
        let mut found = 0;
        let mut attempts = 0;
        while found < per_rule {
            attempts += 1;
            assert!(attempts < 100_000, "could not generate {rule} redexes");
            let e = g.redex(rule, 3);
            if let Some(step) = lmu_one_step(&e, rule.is_extensional()).into_iter().find(|s| s.rule == rule) {
                out.push((rule, e, step.reduct));
                found += 1;
            }
        }
    }
    out
}

/// Translations of both ends under one naming: the naming is chosen for
/// the source and must also be faithful for the target.
pub fn translate_pair(a: &LExpr, b: &LExpr) -> Option<(Expr, Expr)> {
    let ta = translate_with(a, TranslateOptions::default());
    let tb = translate_with(b, TranslateOptions::default());
    (ta.naming == tb.naming && ta.naming == Naming::Identity).then_some((ta.expr, tb.expr))
}

/// Typable λμ-expressions with their principal typings.
pub fn typable_lmu(seed: u64, n: usize) -> Vec<(LExpr, LTyping)> {
    let mut g = LGen::new(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let e = g.expr(4);
        if let Ok(t) = lmu_principal(&e) {
            out.push((e, t));
        }
    }
    out
}

/// The stack judgement a typed λμ-expression translates to.
pub fn translated_judgement(e: &LExpr, t: &LTyping) -> Judgement {
    let ctx = translated_judgement_context(e, &t.gamma, &t.delta, TranslateOptions::default());
    Judgement { subject: translate(e), formula: t.formula.clone(), context: ctx }
}

/// Typable stack expressions from three sources: type-directed generation,
/// proofs found by the prover, and translations of typed λμ-expressions.
pub fn typable_corpus(seed: u64, n: usize) -> Vec<Judgement> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut typed = TypedGen::new(seed);
    let mut out = Vec::new();
    let third = n / 3;
    while out.len() < third {
        out.push(typed.judgement(rng.gen_range(1..6)));
    }
    while out.len() < 2 * third {
        let goal = random_formula(&mut rng, &["a", "b"], 3);
        let hyps: Vec<_> = (0..rng.gen_range(0..2)).map(|_| random_formula(&mut rng, &["a", "b"], 2)).collect();
        if let ProofResult::Proof { term, goal, hyps } = decide(&goal, &hyps) {
            out.push(Judgement { subject: term.into(), formula: Some(goal), context: hyps });
        }
    }
    for (e, t) in typable_lmu(seed, n - out.len()) {
        out.push(translated_judgement(&e, &t));
    }
    out
}

/// Mixed random expressions, typable and untypable.
pub fn mixed_corpus(seed: u64, n: usize) -> Vec<Expr> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut untyped = ExprGen::new(seed);
    let mut typed = TypedGen::new(seed ^ 0x5eed);
    (0..n)
        .map(
            |i| {
                if i % 2 == 0 {
                    untyped.expr(rng.gen_range(1..5))
                } else {
                    typed.judgement(rng.gen_range(1..5)).subject
                }
            },
        )
        .collect()
}

pub const I: &str = "(mu a. car(a) * cdr(a))";
pub const OMEGA: &str = "(mu a. car(a) * a)";

/// Closed processes for the machine, including the control operators.
pub fn machine_corpus(seed: u64, n: usize) -> Vec<Process> {
    let identity = || mu("a", app(car(var("a")), cdr(var("a"))));
    let eps = Name::new("e");
    let v = identity();
    let mut out = vec![
        app(identity(), cons(identity(), nil())),
        app(mu("a", app(car(var("a")), var("a"))), cons(mu("a", app(car(var("a")), var("a"))), nil())),
        app(try_catch_term(&eps, &raise_term(&eps, &v), &identity()), cons(identity(), nil())),
        app(label_term(&eps, &resume_term(&eps, &v)), cons(identity(), nil())),
        app(label_term(&eps, &v), cons(identity(), nil())),
    ];
    let mut g = ExprGen::new(seed);
    while out.len() < n {
        let p = g.process(3);
        if p.free_vars().is_empty() {
            out.push(p);
        }
    }
    out
}

/// Index of the first state that runs `focus` against `context`: its
/// focus reads back to `focus` up to car/cdr steps, its context to `context`.
pub fn find_state(trace: &[MachineState], focus: &Term, context: &Stack) -> Option<usize> {
    trace.iter().position(|s| {
        let head = project_normalize(&readback_term(&s.focus.term, &s.focus.env).into()).0;
        head.as_term().is_some_and(|t| alpha_eq_term(t, focus))
            && alpha_eq_stack(&readback_stack(&s.context.stack, &s.context.env), context)
    })
}

/// Every transition's readback is reachable from the previous readback.
pub fn simulation_holds(p: &Process, max_steps: usize) -> Result<(), String> {
    let r = run(p, max_steps);
    for w in r.trace.windows(2) {
        let (a, b) = (readback(&w[0]), readback(&w[1]));
        if alpha_eq_process(&a, &b) {
            continue;
        }
        if !reaches(&a.clone().into(), &b.clone().into(), false, 2_000) {
            return Err(format!("{} does not reduce to {}", print_process(&a), print_process(&b)));
        }
    }
    Ok(())
}
