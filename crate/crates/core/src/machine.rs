//! A Krivine-style environment machine for processes.
//!
//! A state pairs a term closure (the focus) with a stack closure (the
//! context). The machine has no halting rule: a run ends when it gets stuck
//! or when the step budget is spent.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::frontend::{print_stack, print_term};
use crate::syntax::{app, car, cdr_n, cons, fresh_name, mu, mu_n, nil, var, Name, Process, Stack, Term};

struct EnvNode {
    name: Name,
    value: StackClosure,
    next: Env,
}

/// A persistent map from names to stack closures. Extending never mutates
/// the original.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

impl Env {
    pub fn empty() -> Self {
        Env(None)
    }

    pub fn extend(&self, name: Name, value: StackClosure) -> Env {
        Env(Some(Arc::new(EnvNode { name, value, next: self.clone() })))
    }

    pub fn lookup(&self, name: &Name) -> Option<&StackClosure> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if &node.name == name {
                return Some(&node.value);
            }
            cur = &node.next.0;
        }
        None
    }

    /// Number of bindings, counting shadowed ones.
    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut cur = &self.0;
        while let Some(node) = cur {
            n += 1;
            cur = &node.next.0;
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    /// The environment this one was built from by a single extension.
    pub fn parent(&self) -> Option<&Env> {
        self.0.as_ref().map(|n| &n.next)
    }

    /// Visible bindings, innermost first.
    pub fn bindings(&self) -> Vec<(&Name, &StackClosure)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut cur = &self.0;
        while let Some(node) = cur {
            if seen.insert(&node.name) {
                out.push((&node.name, &node.value));
            }
            cur = &node.next.0;
        }
        out
    }

    /// Whether both handles point at the same binding node.
    pub fn same(&self, other: &Env) -> bool {
        match (&self.0, &other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    fn summary(&self) -> Value {
        Value::Array(
            self.bindings()
                .into_iter()
                .map(|(n, c)| json!({"name": n.as_str(), "stack": print_stack(&c.stack), "envSize": c.env.len()}))
                .collect(),
        )
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings().into_iter().map(|(n, c)| (n, &c.stack))).finish()
    }
}

#[derive(Clone, Debug)]
pub struct StackClosure {
    pub stack: Stack,
    pub env: Env,
}

#[derive(Clone, Debug)]
pub struct TermClosure {
    pub term: Term,
    pub env: Env,
}

#[derive(Clone, Debug)]
pub struct MachineState {
    pub focus: TermClosure,
    pub context: StackClosure,
}

impl MachineState {
    /// `⟨(M, ∅) | (π, ∅)⟩` for `M * π`.
    pub fn initial(p: &Process) -> Self {
        MachineState {
            focus: TermClosure { term: p.term.clone(), env: Env::empty() },
            context: StackClosure { stack: p.stack.clone(), env: Env::empty() },
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "focusTerm": print_term(&self.focus.term),
            "contextStack": print_stack(&self.context.stack),
            "envSummary": {
                "focus": self.focus.env.summary(),
                "context": self.context.env.summary(),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeBase {
    Var(Name),
    Nil,
}

/// Head form of a term after contracting car/cdr redexes along its spine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeadForm {
    MuForm(Name, Process),
    /// `car(cdr^depth(base))`.
    Probe(ProbeBase, usize),
}

enum StackHead {
    Cons(Term, Stack),
    Base(ProbeBase, usize),
}

fn stack_head(s: &Stack) -> StackHead {
    match s {
        Stack::Var(a) => StackHead::Base(ProbeBase::Var(a.clone()), 0),
        Stack::Nil => StackHead::Base(ProbeBase::Nil, 0),
        Stack::Cons(m, tail) => StackHead::Cons((**m).clone(), (**tail).clone()),
        Stack::Cdr(inner) => match stack_head(inner) {
            StackHead::Cons(_, tail) => stack_head(&tail),
            StackHead::Base(b, n) => StackHead::Base(b, n + 1),
        },
    }
}

pub fn car_cdr_nf(m: &Term) -> HeadForm {
    match m {
        Term::Mu(a, p) => HeadForm::MuForm(a.clone(), (**p).clone()),
        Term::Car(s) => match stack_head(s) {
            StackHead::Cons(head, _) => car_cdr_nf(&head),
            StackHead::Base(b, n) => HeadForm::Probe(b, n),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StuckReason {
    /// The head probes `car(cdr^depth(nil))`.
    NilProbe(usize),
    UnboundVariable(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineOutcome {
    Stuck(StuckReason),
    StepLimit,
}

impl fmt::Display for MachineOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineOutcome::Stuck(StuckReason::NilProbe(n)) => write!(f, "stuck: probe of nil at depth {n}"),
            MachineOutcome::Stuck(StuckReason::UnboundVariable(a)) => write!(f, "stuck: unbound variable `{a}`"),
            MachineOutcome::StepLimit => f.write_str("step limit reached"),
        }
    }
}

/// One transition, or the reason there is none.
pub fn step(s: &MachineState) -> Result<MachineState, StuckReason> {
    match car_cdr_nf(&s.focus.term) {
        HeadForm::Probe(ProbeBase::Nil, n) => Err(StuckReason::NilProbe(n)),
        HeadForm::Probe(ProbeBase::Var(a), n) => {
            let bound = s.focus.env.lookup(&a).ok_or(StuckReason::UnboundVariable(a))?;
            Ok(MachineState {
                focus: TermClosure { term: car(cdr_n(bound.stack.clone(), n)), env: bound.env.clone() },
                context: s.context.clone(),
            })
        }
        HeadForm::MuForm(a, body) => {
            let env = s.focus.env.extend(a, s.context.clone());
            Ok(MachineState {
                focus: TermClosure { term: body.term, env: env.clone() },
                context: StackClosure { stack: body.stack, env },
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub max_steps: usize,
    /// How many of the most recent states to keep; `None` keeps all.
    pub trace_capacity: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_steps: 10_000, trace_capacity: None }
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// The retained states, oldest first, ending with the last state.
    pub trace: Vec<MachineState>,
    pub outcome: MachineOutcome,
    /// Transitions taken.
    pub steps: usize,
    pub last: MachineState,
}

pub fn run(p: &Process, max_steps: usize) -> RunResult {
    run_with(p, RunOptions { max_steps, ..Default::default() })
}

pub fn run_with(p: &Process, opts: RunOptions) -> RunResult {
    run_from(MachineState::initial(p), opts)
}

pub fn run_from(start: MachineState, opts: RunOptions) -> RunResult {
    let mut trace = VecDeque::new();
    let keep = |trace: &mut VecDeque<MachineState>, s: &MachineState| {
        if opts.trace_capacity == Some(0) {
            return;
        }
        if let Some(cap) = opts.trace_capacity {
            if trace.len() == cap {
                trace.pop_front();
            }
        }
        trace.push_back(s.clone());
    };
    let mut current = start;
    keep(&mut trace, &current);
    let mut steps = 0;
    let outcome = loop {
        if steps >= opts.max_steps {
            break MachineOutcome::StepLimit;
        }
        match step(&current) {
            Ok(next) => {
                steps += 1;
                current = next;
                keep(&mut trace, &current);
            }
            Err(reason) => break MachineOutcome::Stuck(reason),
        }
    };
    RunResult { trace: trace.into(), outcome, steps, last: current }
}

pub fn trace_to_json(trace: &[MachineState]) -> Value {
    Value::Array(trace.iter().map(MachineState::to_json).collect())
}

fn env_substitution(free: BTreeSet<Name>, env: &Env) -> BTreeMap<Name, Stack> {
    free.into_iter().filter_map(|a| env.lookup(&a).map(|c| (a, readback_stack(&c.stack, &c.env)))).collect()
}

pub fn readback_stack(s: &Stack, env: &Env) -> Stack {
    let map = env_substitution(s.free_vars(), env);
    if map.is_empty() {
        s.clone()
    } else {
        s.subst_many(&map)
    }
}

pub fn readback_term(t: &Term, env: &Env) -> Term {
    let map = env_substitution(t.free_vars(), env);
    if map.is_empty() {
        t.clone()
    } else {
        t.subst_many(&map)
    }
}

/// The process a state denotes: environments substituted away.
pub fn readback(s: &MachineState) -> Process {
    app(readback_term(&s.focus.term, &s.focus.env), readback_stack(&s.context.stack, &s.context.env))
}

// Control operators. Auxiliary binders are chosen fresh for the payloads.

fn avoiding(payloads: &[&Term], also: &[&Name]) -> BTreeSet<Name> {
    let mut avoid: BTreeSet<Name> = payloads.iter().flat_map(|t| t.free_vars()).collect();
    avoid.extend(also.iter().map(|n| (*n).clone()));
    avoid
}

fn fresh(avoid: &mut BTreeSet<Name>, base: &str) -> Name {
    let n = fresh_name(avoid, &Name::new(base));
    avoid.insert(n.clone());
    n
}

/// `μβ.(με.M * β) * ((μδ.car(δ) * β) :: β)`: runs `M` with `ε` bound to a
/// stack whose head jumps back to the current continuation.
pub fn label_term(eps: &Name, m: &Term) -> Term {
    let mut avoid = avoiding(&[m], &[eps]);
    let beta = fresh(&mut avoid, "k");
    let delta = fresh(&mut avoid, "v");
    let jump = mu_n(delta.clone(), app(car(Stack::Var(delta)), Stack::Var(beta.clone())));
    let body = app(mu_n(eps.clone(), app(m.clone(), Stack::Var(beta.clone()))), cons(jump, Stack::Var(beta.clone())));
    mu_n(beta, body)
}

/// `μγ.car(ε) * (M :: γ)`.
pub fn resume_term(eps: &Name, m: &Term) -> Term {
    let mut avoid = avoiding(&[m], &[eps]);
    let gamma = fresh(&mut avoid, "r");
    mu_n(gamma.clone(), app(car(Stack::Var(eps.clone())), cons(m.clone(), Stack::Var(gamma))))
}

/// `μγ.car(ε) * (M :: nil)`.
pub fn raise_term(eps: &Name, m: &Term) -> Term {
    let mut avoid = avoiding(&[m], &[eps]);
    let gamma = fresh(&mut avoid, "r");
    mu_n(gamma, app(car(Stack::Var(eps.clone())), cons(m.clone(), nil())))
}

/// `μβ.(με.M * β) * ((μδ.N * (car(δ) :: β)) :: nil)`: runs `M`; a raise
/// through `ε` passes its payload and the saved continuation to `N`.
pub fn try_catch_term(eps: &Name, m: &Term, n: &Term) -> Term {
    let mut avoid = avoiding(&[m, n], &[eps]);
    let beta = fresh(&mut avoid, "k");
    let delta = fresh(&mut avoid, "v");
    let handler = mu_n(delta.clone(), app(n.clone(), cons(car(Stack::Var(delta)), Stack::Var(beta.clone()))));
    let body = app(mu_n(eps.clone(), app(m.clone(), Stack::Var(beta.clone()))), cons(handler, nil()));
    mu_n(beta, body)
}

/// `μa.car(a) * (μb.car(b) * cdr(a)) :: cdr(a)`.
pub fn callcc_term() -> Term {
    mu(
        "a",
        app(
            car(var("a")),
            cons(mu("b", app(car(var("b")), crate::syntax::cdr(var("a")))), crate::syntax::cdr(var("a"))),
        ),
    )
}
