//! One-step reduction, normalization and joinability for the stack calculus.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::frontend::print_expr;
use crate::search;
pub use crate::search::JoinError;
use crate::syntax::{alpha_eq, alpha_eq_stack, Expr, Process, Stack, Term};

pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_JOIN_BOUND: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleName {
    Beta,
    Car,
    Cdr,
    Eta0,
    Eta1,
}

impl RuleName {
    pub fn is_extensional(self) -> bool {
        matches!(self, RuleName::Eta0 | RuleName::Eta1)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::Beta => "beta",
            RuleName::Car => "car",
            RuleName::Cdr => "cdr",
            RuleName::Eta0 => "eta0",
            RuleName::Eta1 => "eta1",
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub rule: RuleName,
    /// Child indices from the root: cons head 0 / tail 1, the argument of
    /// cdr, car and mu is 0, a process has term 0 and stack 1.
    pub position: Vec<usize>,
    pub before: Expr,
    pub after: Expr,
}

impl ReductionStep {
    pub fn to_json(&self) -> Value {
        json!({
            "rule": self.rule.as_str(),
            "position": self.position,
            "before": print_expr(&self.before),
            "after": print_expr(&self.after),
        })
    }
}

pub fn trace_to_json(trace: &[ReductionStep]) -> Value {
    Value::Array(trace.iter().map(ReductionStep::to_json).collect())
}

// Contractions at the root of a node, if any rule applies there.

/// Which rules a traversal may contract.
#[derive(Clone, Copy)]
struct Rules {
    beta: bool,
    projections: bool,
    eta: bool,
}

impl Rules {
    fn all(extensional: bool) -> Self {
        Rules { beta: true, projections: true, eta: extensional }
    }

    const PROJECTIONS: Rules = Rules { beta: false, projections: true, eta: false };
    const BETA: Rules = Rules { beta: true, projections: false, eta: false };
}

fn contract_process(p: &Process, rules: Rules) -> Option<(RuleName, Process)> {
    match &p.term {
        Term::Mu(a, body) if rules.beta => Some((RuleName::Beta, body.subst(a, &p.stack))),
        _ => None,
    }
}

fn contract_term(t: &Term, rules: Rules) -> Option<(RuleName, Term)> {
    match t {
        Term::Car(s) if rules.projections => match s.as_ref() {
            Stack::Cons(m, _) => Some((RuleName::Car, (**m).clone())),
            _ => None,
        },
        Term::Mu(a, body) if rules.eta => match &body.stack {
            Stack::Var(b) if b == a && !body.term.has_free(a) => Some((RuleName::Eta0, body.term.clone())),
            _ => None,
        },
        _ => None,
    }
}

fn contract_stack(s: &Stack, rules: Rules) -> Option<(RuleName, Stack)> {
    match s {
        Stack::Cdr(inner) if rules.projections => match inner.as_ref() {
            Stack::Cons(_, tail) => Some((RuleName::Cdr, (**tail).clone())),
            _ => None,
        },
        Stack::Cons(head, tail) if rules.eta => match (head.as_ref(), tail.as_ref()) {
            (Term::Car(p1), Stack::Cdr(p2)) if alpha_eq_stack(p1, p2) => Some((RuleName::Eta1, (**p1).clone())),
            _ => None,
        },
        _ => None,
    }
}

/// A redex found during traversal: rule, position and the rebuilt node.
type Found<T> = (RuleName, Vec<usize>, T);

fn prefix<T>(index: usize, found: Vec<Found<T>>) -> impl Iterator<Item = Found<T>> {
    found.into_iter().map(move |(r, mut pos, x)| {
        pos.insert(0, index);
        (r, pos, x)
    })
}

// Each walker returns the reducts of its node in leftmost-outermost order.
// With `first` set it stops after the first one.

fn walk_stack(s: &Stack, rules: Rules, first: bool) -> Vec<Found<Stack>> {
    let mut out = Vec::new();
    if let Some((r, x)) = contract_stack(s, rules) {
        out.push((r, vec![], x));
        if first {
            return out;
        }
    }
    match s {
        Stack::Var(_) | Stack::Nil => {}
        Stack::Cons(m, tail) => {
            let heads = walk_term(m, rules, first);
            out.extend(prefix(0, heads).map(|(r, p, m2)| (r, p, Stack::Cons(Box::new(m2), tail.clone()))));
            if first && !out.is_empty() {
                return out;
            }
            let tails = walk_stack(tail, rules, first);
            out.extend(prefix(1, tails).map(|(r, p, t2)| (r, p, Stack::Cons(m.clone(), Box::new(t2)))));
        }
        Stack::Cdr(inner) => {
            let inners = walk_stack(inner, rules, first);
            out.extend(prefix(0, inners).map(|(r, p, i2)| (r, p, Stack::Cdr(Box::new(i2)))));
        }
    }
    out
}

fn walk_term(t: &Term, rules: Rules, first: bool) -> Vec<Found<Term>> {
    let mut out = Vec::new();
    if let Some((r, x)) = contract_term(t, rules) {
        out.push((r, vec![], x));
        if first {
            return out;
        }
    }
    match t {
        Term::Mu(a, body) => {
            let bodies = walk_process(body, rules, first);
            out.extend(prefix(0, bodies).map(|(r, p, b2)| (r, p, Term::Mu(a.clone(), Box::new(b2)))));
        }
        Term::Car(s) => {
            let inners = walk_stack(s, rules, first);
            out.extend(prefix(0, inners).map(|(r, p, s2)| (r, p, Term::Car(Box::new(s2)))));
        }
    }
    out
}

fn walk_process(p: &Process, rules: Rules, first: bool) -> Vec<Found<Process>> {
    let mut out = Vec::new();
    if let Some((r, x)) = contract_process(p, rules) {
        out.push((r, vec![], x));
        if first {
            return out;
        }
    }
    let terms = walk_term(&p.term, rules, first);
    out.extend(prefix(0, terms).map(|(r, pos, t2)| (r, pos, Process { term: t2, stack: p.stack.clone() })));
    if first && !out.is_empty() {
        return out;
    }
    let stacks = walk_stack(&p.stack, rules, first);
    out.extend(prefix(1, stacks).map(|(r, pos, s2)| (r, pos, Process { term: p.term.clone(), stack: s2 })));
    out
}

fn walk(e: &Expr, rules: Rules, first: bool) -> Vec<Found<Expr>> {
    match e {
        Expr::Stack(s) => walk_stack(s, rules, first).into_iter().map(|(r, p, x)| (r, p, x.into())).collect(),
        Expr::Term(t) => walk_term(t, rules, first).into_iter().map(|(r, p, x)| (r, p, x.into())).collect(),
        Expr::Process(q) => walk_process(q, rules, first).into_iter().map(|(r, p, x)| (r, p, x.into())).collect(),
    }
}

fn to_step(before: &Expr, (rule, position, after): Found<Expr>) -> ReductionStep {
    ReductionStep { rule, position, before: before.clone(), after }
}

/// All one-step reducts, leftmost-outermost first.
pub fn one_step_reducts(e: &Expr, extensional: bool) -> Vec<ReductionStep> {
    walk(e, Rules::all(extensional), false).into_iter().map(|f| to_step(e, f)).collect()
}

/// The leftmost-outermost redex, contracted.
pub fn first_reduct(e: &Expr, extensional: bool) -> Option<ReductionStep> {
    walk(e, Rules::all(extensional), true).into_iter().next().map(|f| to_step(e, f))
}

pub fn is_normal(e: &Expr, extensional: bool) -> bool {
    walk(e, Rules::all(extensional), true).is_empty()
}

/// Reducts only, without step metadata.
pub fn successors(e: &Expr, extensional: bool) -> Vec<Expr> {
    walk(e, Rules::all(extensional), false).into_iter().map(|(_, _, x)| x).collect()
}

/// Contracts car/cdr redexes until none is left. Always terminates: each
/// step shrinks the expression.
pub fn project_normalize(e: &Expr) -> (Expr, Vec<ReductionStep>) {
    let mut current = e.clone();
    let mut trace = Vec::new();
    while let Some(found) = walk(&current, Rules::PROJECTIONS, true).into_iter().next() {
        let step = to_step(&current, found);
        current = step.after.clone();
        trace.push(step);
    }
    (current, trace)
}

/// One β-step at the leftmost-outermost β-redex, followed by the car/cdr
/// steps it enables. This is the granularity at which small examples are
/// usually traced by hand, e.g. `I * I :: nil` to `I * nil` in one move.
pub fn beta_step(e: &Expr) -> Option<(Expr, Vec<ReductionStep>)> {
    let found = walk(e, Rules::BETA, true).into_iter().next()?;
    let first = to_step(e, found);
    let (after, mut rest) = project_normalize(&first.after);
    rest.insert(0, first);
    Some((after, rest))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    /// Picks uniformly among all redexes, from a seeded generator.
    Random(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub extensional: bool,
    pub max_steps: usize,
    pub strategy: Strategy,
    pub record_trace: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            extensional: false,
            max_steps: DEFAULT_MAX_STEPS,
            strategy: Strategy::LeftmostOutermost,
            record_trace: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    NormalForm(Expr),
    /// The budget ran out; carries the last expression reached.
    StepLimitExceeded(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizeResult {
    pub outcome: Outcome,
    /// Number of steps taken, also when the trace is not recorded.
    pub steps: usize,
    pub trace: Vec<ReductionStep>,
}

impl NormalizeResult {
    pub fn normal_form(&self) -> Option<&Expr> {
        match &self.outcome {
            Outcome::NormalForm(e) => Some(e),
            Outcome::StepLimitExceeded(_) => None,
        }
    }
}

pub fn normalize(e: &Expr, extensional: bool, max_steps: usize) -> NormalizeResult {
    normalize_with(e, &NormalizeOptions { extensional, max_steps, ..Default::default() })
}

pub fn normalize_with(e: &Expr, opts: &NormalizeOptions) -> NormalizeResult {
    let mut rng = match opts.strategy {
        Strategy::Random(seed) => Some(StdRng::seed_from_u64(seed)),
        Strategy::LeftmostOutermost => None,
    };
    let mut current = e.clone();
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        let next = match &mut rng {
            None => walk(&current, Rules::all(opts.extensional), true).into_iter().next(),
            Some(rng) => {
                let mut all = walk(&current, Rules::all(opts.extensional), false);
                if all.is_empty() {
                    None
                } else {
                    let i = rng.gen_range(0..all.len());
                    Some(all.swap_remove(i))
                }
            }
        };
        let Some(found) = next else {
            return NormalizeResult { outcome: Outcome::NormalForm(current), steps, trace };
        };
        if steps >= opts.max_steps {
            return NormalizeResult { outcome: Outcome::StepLimitExceeded(current), steps, trace };
        }
        steps += 1;
        let step = to_step(&current, found);
        current = step.after.clone();
        if opts.record_trace {
            trace.push(step);
        }
    }
}

/// Searches for a common reduct of `e1` and `e2` by alternating BFS over
/// both reduction graphs, comparing expressions up to α-equivalence. When
/// the BFS bound runs out, both sides are normalized leftmost-outermost
/// with `bound` as the step budget, and a shared normal form is returned as
/// the witness.
pub fn joinable(e1: &Expr, e2: &Expr, extensional: bool, bound: usize) -> Result<Expr, JoinError> {
    if e1.sort() != e2.sort() {
        return Err(JoinError::SortMismatch { left: e1.sort().to_string(), right: e2.sort().to_string() });
    }
    match search::join(e1.clone(), e2.clone(), bound, |e| successors(e, extensional), Expr::canonical) {
        Err(err @ JoinError::NotFoundWithinBound { .. }) => {
            let opts = NormalizeOptions { extensional, max_steps: bound, record_trace: false, ..Default::default() };
            let n1 = normalize_with(e1, &opts);
            let n2 = normalize_with(e2, &opts);
            match (n1.normal_form(), n2.normal_form()) {
                (Some(a), Some(b)) if alpha_eq(a, b) => Ok(a.clone()),
                _ => Err(err),
            }
        }
        other => other,
    }
}

/// Whether `to` is reachable from `from` (up to α) within `bound` nodes.
pub fn reaches(from: &Expr, to: &Expr, extensional: bool, bound: usize) -> bool {
    search::reaches(from.clone(), &to.canonical(), bound, |e| successors(e, extensional), Expr::canonical)
}
