//! Classical implicational types for the stack calculus.
//!
//! Judgements come in three forms: `pi : A | ctx` for stacks, `M : A | ctx`
//! for terms and `P | ctx` for processes. Inference runs first-order
//! unification with occurs check over metavariables; the returned formula is
//! principal, with unconstrained metavariables shown as fresh atoms.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{fresh_name, Expr, Name, Process, Stack, Term};

/// Implicational formulas over atoms and falsity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Name),
    Falsum,
    Arrow(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Name::new(name))
    }

    pub fn arrow(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Arrow(Box::new(lhs), Box::new(rhs))
    }

    /// `A -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::arrow(a, Formula::Falsum)
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Formula::Arrow(..))
    }

    /// Arity: the number of arrows along the right spine.
    pub fn rank(&self) -> usize {
        match self {
            Formula::Arrow(_, rhs) => 1 + rhs.rank(),
            _ => 0,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Falsum => {}
            Formula::Arrow(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        out.insert(self.clone());
        if let Formula::Arrow(l, r) = self {
            l.collect_subformulas(out);
            r.collect_subformulas(out);
        }
    }

    /// Number of arrows.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Arrow(l, r) => 1 + l.connectives() + r.connectives(),
            _ => 0,
        }
    }
}

pub fn rank(a: &Formula) -> usize {
    a.rank()
}

/// Formulas of the `{∧, ¬, ⊥}` fragment targeted by the CPS type translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntFormula {
    Atom(Name),
    Falsum,
    Neg(Box<IntFormula>),
    Conj(Box<IntFormula>, Box<IntFormula>),
}

impl fmt::Display for IntFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntFormula::Atom(a) => write!(f, "{a}"),
            IntFormula::Falsum => f.write_str("false"),
            IntFormula::Neg(inner) => match **inner {
                IntFormula::Conj(..) => write!(f, "~({inner})"),
                _ => write!(f, "~{inner}"),
            },
            IntFormula::Conj(l, r) => {
                match **l {
                    IntFormula::Conj(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                f.write_str(" & ")?;
                match **r {
                    IntFormula::Conj(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
        }
    }
}

fn pos(a: &Formula) -> IntFormula {
    match a {
        Formula::Falsum => IntFormula::Neg(Box::new(IntFormula::Falsum)),
        Formula::Atom(x) => IntFormula::Atom(x.clone()),
        Formula::Arrow(l, r) => IntFormula::Conj(Box::new(neg(l)), Box::new(pos(r))),
    }
}

fn neg(a: &Formula) -> IntFormula {
    IntFormula::Neg(Box::new(pos(a)))
}

/// Returns `(Pos(a), Neg(a))`.
pub fn cps_translate(a: &Formula) -> (IntFormula, IntFormula) {
    (pos(a), neg(a))
}

/// An ordered assignment of formulas to stack variables. Names are unique;
/// pushing an existing name replaces its formula in place.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    entries: Vec<(Name, Formula)>,
}

impl Context {
    pub fn new() -> Self {
        Context { entries: Vec::new() }
    }

    pub fn from_entries<I: IntoIterator<Item = (Name, Formula)>>(entries: I) -> Self {
        let mut ctx = Context::new();
        for (n, f) in entries {
            ctx.push(n, f);
        }
        ctx
    }

    pub fn push(&mut self, name: Name, formula: Formula) {
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = formula,
            None => self.entries.push((name, formula)),
        }
    }

    pub fn with(mut self, name: Name, formula: Formula) -> Self {
        self.push(name, formula);
        self
    }

    pub fn get(&self, name: &Name) -> Option<&Formula> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Formula)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(n, _)| n)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|(_, f)| f)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn atoms(&self) -> BTreeSet<Name> {
        self.formulas().flat_map(Formula::atoms).collect()
    }

    /// Entries of `other` are added, overriding ours on name clashes.
    pub fn union(&self, other: &Context) -> Context {
        let mut out = self.clone();
        for (n, f) in other.iter() {
            out.push(n.clone(), f.clone());
        }
        out
    }
}

/// A formula with unification variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetaFormula {
    Meta(u32),
    Atom(Name),
    Falsum,
    Arrow(Box<MetaFormula>, Box<MetaFormula>),
}

impl MetaFormula {
    pub fn arrow(l: MetaFormula, r: MetaFormula) -> MetaFormula {
        MetaFormula::Arrow(Box::new(l), Box::new(r))
    }
}

impl From<&Formula> for MetaFormula {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::Atom(a) => MetaFormula::Atom(a.clone()),
            Formula::Falsum => MetaFormula::Falsum,
            Formula::Arrow(l, r) => MetaFormula::arrow(l.as_ref().into(), r.as_ref().into()),
        }
    }
}

impl fmt::Display for MetaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaFormula::Meta(i) => write!(f, "?{i}"),
            MetaFormula::Atom(a) => write!(f, "{a}"),
            MetaFormula::Falsum => f.write_str("false"),
            MetaFormula::Arrow(l, r) => match **l {
                MetaFormula::Arrow(..) => write!(f, "({l}) -> {r}"),
                _ => write!(f, "{l} -> {r}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyError {
    Mismatch(MetaFormula, MetaFormula),
    Occurs(u32, MetaFormula),
}

/// Substitution store for metavariables, local to one inference session.
#[derive(Clone, Debug, Default)]
pub struct Unifier {
    bindings: Vec<Option<MetaFormula>>,
}

impl Unifier {
    pub fn new() -> Self {
        Unifier::default()
    }

    pub fn fresh(&mut self) -> MetaFormula {
        self.bindings.push(None);
        MetaFormula::Meta((self.bindings.len() - 1) as u32)
    }

    fn shallow(&self, t: &MetaFormula) -> MetaFormula {
        let mut cur = t.clone();
        while let MetaFormula::Meta(i) = cur {
            match &self.bindings[i as usize] {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    fn occurs(&self, id: u32, t: &MetaFormula) -> bool {
        match self.shallow(t) {
            MetaFormula::Meta(j) => j == id,
            MetaFormula::Arrow(l, r) => self.occurs(id, &l) || self.occurs(id, &r),
            _ => false,
        }
    }

    pub fn unify(&mut self, a: &MetaFormula, b: &MetaFormula) -> Result<(), UnifyError> {
        let a = self.shallow(a);
        let b = self.shallow(b);
        match (&a, &b) {
            (MetaFormula::Meta(i), MetaFormula::Meta(j)) if i == j => Ok(()),
            (MetaFormula::Meta(i), other) | (other, MetaFormula::Meta(i)) => {
                if self.occurs(*i, other) {
                    Err(UnifyError::Occurs(*i, self.resolve(other)))
                } else {
                    self.bindings[*i as usize] = Some(other.clone());
                    Ok(())
                }
            }
            (MetaFormula::Atom(x), MetaFormula::Atom(y)) if x == y => Ok(()),
            (MetaFormula::Falsum, MetaFormula::Falsum) => Ok(()),
            (MetaFormula::Arrow(l1, r1), MetaFormula::Arrow(l2, r2)) => {
                self.unify(l1, l2)?;
                self.unify(r1, r2)
            }
            _ => Err(UnifyError::Mismatch(self.resolve(&a), self.resolve(&b))),
        }
    }

    /// Applies the current substitution everywhere.
    pub fn resolve(&self, t: &MetaFormula) -> MetaFormula {
        match self.shallow(t) {
            MetaFormula::Arrow(l, r) => MetaFormula::arrow(self.resolve(&l), self.resolve(&r)),
            other => other,
        }
    }
}

/// Turns resolved metaformulas into formulas, naming each unconstrained
/// metavariable by a distinct atom not in `avoid`.
#[derive(Clone, Debug)]
pub struct Grounding {
    avoid: BTreeSet<Name>,
    assigned: Vec<(u32, Name)>,
    base: Name,
}

impl Grounding {
    pub fn new(avoid: BTreeSet<Name>) -> Self {
        Grounding { avoid, assigned: Vec::new(), base: Name::new("x") }
    }

    pub fn ground(&mut self, unifier: &Unifier, t: &MetaFormula) -> Formula {
        match unifier.resolve(t) {
            MetaFormula::Meta(i) => {
                if let Some((_, n)) = self.assigned.iter().find(|(j, _)| *j == i) {
                    return Formula::Atom(n.clone());
                }
                let name = fresh_name(&self.avoid, &self.base);
                self.avoid.insert(name.clone());
                self.assigned.push((i, name.clone()));
                Formula::Atom(name)
            }
            MetaFormula::Atom(a) => Formula::Atom(a),
            MetaFormula::Falsum => Formula::Falsum,
            MetaFormula::Arrow(l, r) => Formula::arrow(self.ground(unifier, &l), self.ground(unifier, &r)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnificationFailure { expected: String, found: String },
    OccursCheck { meta: String, formula: String },
    UnboundVariable(Name),
}

/// A typing failure; `path` locates the offending subexpression with the
/// same child indices as reduction positions.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{} at position {:?}", describe(kind), path)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<usize>,
}

fn describe(kind: &TypeErrorKind) -> String {
    match kind {
        TypeErrorKind::UnificationFailure { expected, found } => {
            format!("cannot unify `{expected}` with `{found}`")
        }
        TypeErrorKind::OccursCheck { meta, formula } => {
            format!("occurs check: `{meta}` occurs in `{formula}`")
        }
        TypeErrorKind::UnboundVariable(n) => format!("unbound variable `{n}`"),
    }
}

impl TypeError {
    fn from_unify(err: UnifyError, path: &[usize]) -> TypeError {
        let kind = match err {
            UnifyError::Mismatch(a, b) => {
                TypeErrorKind::UnificationFailure { expected: a.to_string(), found: b.to_string() }
            }
            UnifyError::Occurs(i, t) => TypeErrorKind::OccursCheck { meta: format!("?{i}"), formula: t.to_string() },
        };
        TypeError { kind, path: path.to_vec() }
    }
}

/// One inference session over the rules of the typed stack calculus.
struct Inference {
    unifier: Unifier,
    // innermost binding last
    scope: Vec<(Name, MetaFormula)>,
    // when set, free variables missing from scope get fresh metas
    open: Option<Vec<(Name, MetaFormula)>>,
    path: Vec<usize>,
}

impl Inference {
    fn new(ctx: &Context, open: bool) -> Self {
        Inference {
            unifier: Unifier::new(),
            scope: ctx.iter().map(|(n, f)| (n.clone(), f.into())).collect(),
            open: if open { Some(Vec::new()) } else { None },
            path: Vec::new(),
        }
    }

    fn unify(&mut self, a: &MetaFormula, b: &MetaFormula) -> Result<(), TypeError> {
        self.unifier.unify(a, b).map_err(|e| TypeError::from_unify(e, &self.path))
    }

    fn lookup(&mut self, a: &Name) -> Result<MetaFormula, TypeError> {
        if let Some((_, t)) = self.scope.iter().rev().find(|(n, _)| n == a) {
            return Ok(t.clone());
        }
        let fresh = self.unifier.fresh();
        match &mut self.open {
            Some(free) => {
                if let Some((_, t)) = free.iter().find(|(n, _)| n == a) {
                    return Ok(t.clone());
                }
                free.push((a.clone(), fresh.clone()));
                Ok(fresh)
            }
            None => Err(TypeError { kind: TypeErrorKind::UnboundVariable(a.clone()), path: self.path.clone() }),
        }
    }

    fn child<T>(&mut self, index: usize, f: impl FnOnce(&mut Self) -> Result<T, TypeError>) -> Result<T, TypeError> {
        self.path.push(index);
        let r = f(self);
        self.path.pop();
        r
    }

    fn stack(&mut self, s: &Stack) -> Result<MetaFormula, TypeError> {
        match s {
            Stack::Var(a) => self.lookup(a),
            Stack::Nil => Ok(MetaFormula::Falsum),
            Stack::Cons(m, tail) => {
                let a = self.child(0, |inf| inf.term(m))?;
                let b = self.child(1, |inf| inf.stack(tail))?;
                Ok(MetaFormula::arrow(a, b))
            }
            Stack::Cdr(inner) => {
                let t = self.child(0, |inf| inf.stack(inner))?;
                let a = self.unifier.fresh();
                let b = self.unifier.fresh();
                self.unify(&MetaFormula::arrow(a, b.clone()), &t)?;
                Ok(b)
            }
        }
    }

    fn term(&mut self, m: &Term) -> Result<MetaFormula, TypeError> {
        match m {
            Term::Car(inner) => {
                let t = self.child(0, |inf| inf.stack(inner))?;
                let a = self.unifier.fresh();
                let b = self.unifier.fresh();
                self.unify(&MetaFormula::arrow(a.clone(), b), &t)?;
                Ok(a)
            }
            Term::Mu(binder, body) => {
                let a = self.unifier.fresh();
                self.scope.push((binder.clone(), a.clone()));
                let r = self.child(0, |inf| inf.process(body));
                self.scope.pop();
                r?;
                Ok(a)
            }
        }
    }

    fn process(&mut self, p: &Process) -> Result<(), TypeError> {
        let a = self.child(0, |inf| inf.term(&p.term))?;
        let b = self.child(1, |inf| inf.stack(&p.stack))?;
        self.unify(&a, &b)
    }

    fn expr(&mut self, e: &Expr) -> Result<Option<MetaFormula>, TypeError> {
        match e {
            Expr::Stack(s) => self.stack(s).map(Some),
            Expr::Term(t) => self.term(t).map(Some),
            Expr::Process(p) => self.process(p).map(|_| None),
        }
    }
}

fn ground_result(inf: &Inference, ctx: &Context, t: &MetaFormula) -> Formula {
    let mut g = Grounding::new(ctx.atoms());
    g.ground(&inf.unifier, t)
}

/// Principal type of `m` under `ctx`. Every free variable must be in `ctx`.
pub fn infer_term(m: &Term, ctx: &Context) -> Result<Formula, TypeError> {
    let mut inf = Inference::new(ctx, false);
    let t = inf.term(m)?;
    Ok(ground_result(&inf, ctx, &t))
}

pub fn infer_stack(s: &Stack, ctx: &Context) -> Result<Formula, TypeError> {
    let mut inf = Inference::new(ctx, false);
    let t = inf.stack(s)?;
    Ok(ground_result(&inf, ctx, &t))
}

/// Succeeds iff `p | ctx` is derivable.
pub fn infer_process(p: &Process, ctx: &Context) -> Result<(), TypeError> {
    Inference::new(ctx, false).process(p)
}

fn check_against(
    ctx: &Context,
    expected: Option<&Formula>,
    run: impl FnOnce(&mut Inference) -> Result<Option<MetaFormula>, TypeError>,
) -> Result<(), TypeError> {
    let mut inf = Inference::new(ctx, false);
    let got = run(&mut inf)?;
    if let (Some(got), Some(expected)) = (got, expected) {
        inf.unify(&expected.into(), &got)?;
    }
    Ok(())
}

pub fn check_term_diag(m: &Term, a: &Formula, ctx: &Context) -> Result<(), TypeError> {
    check_against(ctx, Some(a), |inf| inf.term(m).map(Some))
}

pub fn check_stack_diag(s: &Stack, a: &Formula, ctx: &Context) -> Result<(), TypeError> {
    check_against(ctx, Some(a), |inf| inf.stack(s).map(Some))
}

/// `M : a | ctx` is derivable.
pub fn check_term(m: &Term, a: &Formula, ctx: &Context) -> bool {
    check_term_diag(m, a, ctx).is_ok()
}

/// `pi : a | ctx` is derivable.
pub fn check_stack(s: &Stack, a: &Formula, ctx: &Context) -> bool {
    check_stack_diag(s, a, ctx).is_ok()
}

/// `P | ctx` is derivable.
pub fn check_process(p: &Process, ctx: &Context) -> bool {
    infer_process(p, ctx).is_ok()
}

/// A judgement about one expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub subject: Expr,
    /// `None` exactly for processes.
    pub formula: Option<Formula>,
    pub context: Context,
}

impl Judgement {
    pub fn check(&self) -> bool {
        self.check_diag().is_ok()
    }

    pub fn check_diag(&self) -> Result<(), TypeError> {
        match (&self.subject, &self.formula) {
            (Expr::Stack(s), Some(a)) => check_stack_diag(s, a, &self.context),
            (Expr::Term(m), Some(a)) => check_term_diag(m, a, &self.context),
            (Expr::Process(p), None) => infer_process(p, &self.context),
            _ => Err(TypeError {
                kind: TypeErrorKind::UnificationFailure {
                    expected: "a formula matching the subject's sort".into(),
                    found: "sort mismatch".into(),
                },
                path: Vec::new(),
            }),
        }
    }

    /// The same judgement about a different subject.
    pub fn with_subject(&self, subject: Expr) -> Judgement {
        Judgement { subject, formula: self.formula.clone(), context: self.context.clone() }
    }
}

/// Principal typing of an open expression: free variables not in `ctx`
/// receive fresh types, reported in the returned context (after the
/// entries of `ctx`).
pub fn principal_typing(e: &Expr, ctx: &Context) -> Result<Judgement, TypeError> {
    let mut inf = Inference::new(ctx, true);
    let t = inf.expr(e)?;
    let mut g = Grounding::new(ctx.atoms());
    let formula = t.map(|t| g.ground(&inf.unifier, &t));
    let mut context = ctx.clone();
    for (n, m) in inf.open.take().unwrap_or_default() {
        let f = g.ground(&inf.unifier, &m);
        context.push(n, f);
    }
    Ok(Judgement { subject: e.clone(), formula, context })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_formula, parse_term};
    use crate::syntax::{app, car, cdr, mu, nil, var};

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn identity() -> Term {
        mu("a", app(car(var("a")), cdr(var("a"))))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Formula::Falsum), 0);
        assert_eq!(rank(&f("a -> b")), 1);
        assert_eq!(rank(&f("a -> b -> c")), 2);
        assert_eq!(rank(&f("(a -> b) -> c")), 1);
    }

    #[test]
    fn infers_identity() {
        let t = infer_term(&identity(), &Context::new()).unwrap();
        assert_eq!(t, f("x -> x"));
    }

    #[test]
    fn nil_is_falsum() {
        assert_eq!(infer_stack(&nil(), &Context::new()).unwrap(), Formula::Falsum);
        assert!(check_stack(&nil(), &Formula::Falsum, &Context::new()));
        assert!(!check_stack(&nil(), &f("a"), &Context::new()));
    }

    #[test]
    fn checks_instances_of_principal_type() {
        let ctx = Context::new();
        assert!(check_term(&identity(), &f("a -> a"), &ctx));
        assert!(check_term(&identity(), &f("(a -> b) -> a -> b"), &ctx));
        assert!(!check_term(&identity(), &f("a -> b"), &ctx));
    }

    #[test]
    fn callcc_has_peirce_type() {
        let callcc = parse_term("mu a. car(a) * (mu b. car(b) * cdr(a)) :: cdr(a)").unwrap();
        assert!(check_term(&callcc, &f("((a -> b) -> a) -> a"), &Context::new()));
        let principal = infer_term(&callcc, &Context::new()).unwrap();
        assert_eq!(principal, f("((x -> x1) -> x) -> x"));
    }

    #[test]
    fn omega_fails_occurs_check() {
        let omega = mu("a", app(car(var("a")), var("a")));
        let err = infer_term(&omega, &Context::new()).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::OccursCheck { .. }), "{err}");
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn unbound_variable_reports_path() {
        let m = mu("a", app(car(var("a")), cdr(var("b"))));
        let err = infer_term(&m, &Context::new()).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::UnboundVariable(Name::new("b")));
        assert_eq!(err.path, vec![0, 1, 0]);
    }

    #[test]
    fn mismatch_against_context() {
        let ctx = Context::new().with(Name::new("g"), f("a"));
        // car(g) needs g : X -> Y
        let err = infer_term(&car(var("g")), &ctx).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::UnificationFailure { .. }));
    }

    #[test]
    fn mu_shadows_context() {
        let ctx = Context::new().with(Name::new("a"), Formula::Falsum);
        assert_eq!(infer_term(&identity(), &ctx).unwrap(), f("x -> x"));
    }

    #[test]
    fn weakening_is_admissible() {
        let ctx = Context::new().with(Name::new("unused"), f("c"));
        assert!(check_term(&identity(), &f("a -> a"), &ctx));
    }

    #[test]
    fn fresh_atoms_avoid_context_atoms() {
        let ctx = Context::new().with(Name::new("g"), f("x -> x1"));
        let t = infer_term(&identity(), &ctx).unwrap();
        assert_eq!(t, f("x2 -> x2"));
    }

    #[test]
    fn principal_typing_of_open_expression() {
        let e: Expr = app(car(var("g")), var("b")).into();
        let j = principal_typing(&e, &Context::new()).unwrap();
        assert_eq!(j.formula, None);
        assert_eq!(j.context.get(&Name::new("g")), Some(&f("x -> x1")));
        assert_eq!(j.context.get(&Name::new("b")), Some(&f("x")));
        assert!(j.check());
    }

    #[test]
    fn cps_examples() {
        let (p, _) = cps_translate(&Formula::Falsum);
        assert_eq!(p, IntFormula::Neg(Box::new(IntFormula::Falsum)));
        let (p, n) = cps_translate(&f("a"));
        assert_eq!(p, IntFormula::Atom(Name::new("a")));
        assert_eq!(n, IntFormula::Neg(Box::new(IntFormula::Atom(Name::new("a")))));
        let (p, _) = cps_translate(&f("a -> false"));
        let expected = IntFormula::Conj(
            Box::new(IntFormula::Neg(Box::new(IntFormula::Atom(Name::new("a"))))),
            Box::new(IntFormula::Neg(Box::new(IntFormula::Falsum))),
        );
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "~a & ~false");
    }
}
