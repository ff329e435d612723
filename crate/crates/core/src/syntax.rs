//! Three-sorted abstract syntax: stacks, terms and processes.
//!
//! The only binder is `mu`, which binds a stack variable inside a process.
//! Expressions carry names; α-equivalence is decided structurally and
//! substitution renames binders on demand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A stack variable.
///
/// Names are cheap to clone and totally ordered so that sets of names iterate
/// deterministically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(text: &str) -> Self {
        Name(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for `[A-Za-z][A-Za-z0-9_']*`.
    pub fn is_valid_ident(text: &str) -> bool {
        let mut chars = text.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    }
}

impl From<&str> for Name {
    fn from(text: &str) -> Self {
        Name::new(text)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Returns `base` when it is not in `avoid`, otherwise the stem of `base`
/// (trailing digits stripped) followed by the smallest positive suffix that
/// is not in `avoid`.
pub fn fresh_name(avoid: &BTreeSet<Name>, base: &Name) -> Name {
    if !avoid.contains(base) {
        return base.clone();
    }
    let stem = base.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base.as_str() } else { stem };
    (1u64..)
        .map(|i| Name::new(&format!("{stem}{i}")))
        .find(|candidate| !avoid.contains(candidate))
        .expect("name supply is unbounded")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Stack {
    Var(Name),
    Nil,
    Cons(Box<Term>, Box<Stack>),
    Cdr(Box<Stack>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Mu(Name, Box<Process>),
    Car(Box<Stack>),
}

/// The application `term * stack`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Process {
    pub term: Term,
    pub stack: Stack,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Stack,
    Term,
    Process,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Stack => "stack",
            Sort::Term => "term",
            Sort::Process => "process",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Stack(Stack),
    Term(Term),
    Process(Process),
}

// Constructors. These read closer to the concrete syntax than the raw variants.

pub fn var(name: &str) -> Stack {
    Stack::Var(Name::new(name))
}

pub fn nil() -> Stack {
    Stack::Nil
}

pub fn cons(head: Term, tail: Stack) -> Stack {
    Stack::Cons(Box::new(head), Box::new(tail))
}

pub fn cdr(arg: Stack) -> Stack {
    Stack::Cdr(Box::new(arg))
}

/// `cdr` applied `n` times.
pub fn cdr_n(arg: Stack, n: usize) -> Stack {
    (0..n).fold(arg, |s, _| cdr(s))
}

pub fn car(arg: Stack) -> Term {
    Term::Car(Box::new(arg))
}

pub fn mu(binder: &str, body: Process) -> Term {
    Term::Mu(Name::new(binder), Box::new(body))
}

pub fn mu_n(binder: Name, body: Process) -> Term {
    Term::Mu(binder, Box::new(body))
}

pub fn app(term: Term, stack: Stack) -> Process {
    Process { term, stack }
}

/// Which binder names are shadowed during a traversal.
type Bound = Vec<Name>;

impl Stack {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Bound, out: &mut BTreeSet<Name>) {
        match self {
            Stack::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Stack::Nil => {}
            Stack::Cons(m, s) => {
                m.collect_free(bound, out);
                s.collect_free(bound, out);
            }
            Stack::Cdr(s) => s.collect_free(bound, out),
        }
    }

    pub fn has_free(&self, name: &Name) -> bool {
        match self {
            Stack::Var(a) => a == name,
            Stack::Nil => false,
            Stack::Cons(m, s) => m.has_free(name) || s.has_free(name),
            Stack::Cdr(s) => s.has_free(name),
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Stack::Var(a) => {
                out.insert(a.clone());
            }
            Stack::Nil => {}
            Stack::Cons(m, s) => {
                m.collect_names(out);
                s.collect_names(out);
            }
            Stack::Cdr(s) => s.collect_names(out),
        }
    }

    pub fn subst(&self, alpha: &Name, pi: &Stack) -> Stack {
        let mut map = BTreeMap::new();
        map.insert(alpha.clone(), pi.clone());
        self.subst_many(&map)
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst_many(&self, map: &BTreeMap<Name, Stack>) -> Stack {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Stack::Var(a) => map.get(a).cloned().unwrap_or_else(|| self.clone()),
            Stack::Nil => Stack::Nil,
            Stack::Cons(m, s) => cons(m.subst_many(map), s.subst_many(map)),
            Stack::Cdr(s) => cdr(s.subst_many(map)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Stack::Var(_) | Stack::Nil => 1,
            Stack::Cons(m, s) => 1 + m.size() + s.size(),
            Stack::Cdr(s) => 1 + s.size(),
        }
    }
}

impl Term {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Bound, out: &mut BTreeSet<Name>) {
        match self {
            Term::Mu(a, p) => {
                bound.push(a.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            Term::Car(s) => s.collect_free(bound, out),
        }
    }

    pub fn has_free(&self, name: &Name) -> bool {
        match self {
            Term::Mu(a, p) => a != name && p.has_free(name),
            Term::Car(s) => s.has_free(name),
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Mu(a, p) => {
                out.insert(a.clone());
                p.collect_names(out);
            }
            Term::Car(s) => s.collect_names(out),
        }
    }

    pub fn subst(&self, alpha: &Name, pi: &Stack) -> Term {
        let mut map = BTreeMap::new();
        map.insert(alpha.clone(), pi.clone());
        self.subst_many(&map)
    }

    pub fn subst_many(&self, map: &BTreeMap<Name, Stack>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Term::Car(s) => car(s.subst_many(map)),
            Term::Mu(binder, body) => {
                let mut inner: BTreeMap<Name, Stack> = map
                    .iter()
                    .filter(|(k, _)| *k != binder && body.has_free(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                if inner.is_empty() {
                    return self.clone();
                }
                let incoming: BTreeSet<Name> = inner.values().flat_map(|v| v.free_vars()).collect();
                if incoming.contains(binder) {
                    let mut avoid = body.free_vars();
                    avoid.extend(incoming);
                    avoid.extend(inner.keys().cloned());
                    let renamed = fresh_name(&avoid, binder);
                    inner.insert(binder.clone(), Stack::Var(renamed.clone()));
                    mu_n(renamed, body.subst_many(&inner))
                } else {
                    mu_n(binder.clone(), body.subst_many(&inner))
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Mu(_, p) => 1 + p.size(),
            Term::Car(s) => 1 + s.size(),
        }
    }
}

impl Process {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Bound, out: &mut BTreeSet<Name>) {
        self.term.collect_free(bound, out);
        self.stack.collect_free(bound, out);
    }

    pub fn has_free(&self, name: &Name) -> bool {
        self.term.has_free(name) || self.stack.has_free(name)
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        self.term.collect_names(out);
        self.stack.collect_names(out);
    }

    pub fn subst(&self, alpha: &Name, pi: &Stack) -> Process {
        let mut map = BTreeMap::new();
        map.insert(alpha.clone(), pi.clone());
        self.subst_many(&map)
    }

    pub fn subst_many(&self, map: &BTreeMap<Name, Stack>) -> Process {
        app(self.term.subst_many(map), self.stack.subst_many(map))
    }

    pub fn size(&self) -> usize {
        1 + self.term.size() + self.stack.size()
    }
}

impl Expr {
    pub fn sort(&self) -> Sort {
        match self {
            Expr::Stack(_) => Sort::Stack,
            Expr::Term(_) => Sort::Term,
            Expr::Process(_) => Sort::Process,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            Expr::Stack(s) => s.free_vars(),
            Expr::Term(t) => t.free_vars(),
            Expr::Process(p) => p.free_vars(),
        }
    }

    pub fn has_free(&self, name: &Name) -> bool {
        match self {
            Expr::Stack(s) => s.has_free(name),
            Expr::Term(t) => t.has_free(name),
            Expr::Process(p) => p.has_free(name),
        }
    }

    /// Every name occurring in the expression, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        match self {
            Expr::Stack(s) => s.collect_names(&mut out),
            Expr::Term(t) => t.collect_names(&mut out),
            Expr::Process(p) => p.collect_names(&mut out),
        }
        out
    }

    /// `self[pi/alpha]`.
    pub fn subst_stack(&self, pi: &Stack, alpha: &Name) -> Expr {
        match self {
            Expr::Stack(s) => Expr::Stack(s.subst(alpha, pi)),
            Expr::Term(t) => Expr::Term(t.subst(alpha, pi)),
            Expr::Process(p) => Expr::Process(p.subst(alpha, pi)),
        }
    }

    pub fn subst_many(&self, map: &BTreeMap<Name, Stack>) -> Expr {
        match self {
            Expr::Stack(s) => Expr::Stack(s.subst_many(map)),
            Expr::Term(t) => Expr::Term(t.subst_many(map)),
            Expr::Process(p) => Expr::Process(p.subst_many(map)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Stack(s) => s.size(),
            Expr::Term(t) => t.size(),
            Expr::Process(p) => p.size(),
        }
    }

    /// A representative of the α-class of `self`: binders are renamed by
    /// nesting depth to names that cannot be written in concrete syntax, so
    /// two expressions are α-equivalent iff their canonical forms are equal.
    pub fn canonical(&self) -> Expr {
        let mut scope = Vec::new();
        match self {
            Expr::Stack(s) => Expr::Stack(canon_stack(s, &mut scope)),
            Expr::Term(t) => Expr::Term(canon_term(t, &mut scope)),
            Expr::Process(p) => Expr::Process(canon_process(p, &mut scope)),
        }
    }

    pub fn as_stack(&self) -> Option<&Stack> {
        match self {
            Expr::Stack(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Expr::Term(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_process(&self) -> Option<&Process> {
        match self {
            Expr::Process(p) => Some(p),
            _ => None,
        }
    }
}

impl From<Stack> for Expr {
    fn from(s: Stack) -> Self {
        Expr::Stack(s)
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}

impl From<Process> for Expr {
    fn from(p: Process) -> Self {
        Expr::Process(p)
    }
}

// scope maps original binder name -> canonical name, innermost last
type Scope = Vec<(Name, Name)>;

fn lookup_scope(scope: &Scope, a: &Name) -> Name {
    scope.iter().rev().find(|(orig, _)| orig == a).map(|(_, canon)| canon.clone()).unwrap_or_else(|| a.clone())
}

fn canon_stack(s: &Stack, scope: &mut Scope) -> Stack {
    match s {
        Stack::Var(a) => Stack::Var(lookup_scope(scope, a)),
        Stack::Nil => Stack::Nil,
        Stack::Cons(m, t) => cons(canon_term(m, scope), canon_stack(t, scope)),
        Stack::Cdr(t) => cdr(canon_stack(t, scope)),
    }
}

fn canon_term(m: &Term, scope: &mut Scope) -> Term {
    match m {
        Term::Car(s) => car(canon_stack(s, scope)),
        Term::Mu(a, p) => {
            let canon = Name::new(&format!("%{}", scope.len()));
            scope.push((a.clone(), canon.clone()));
            let body = canon_process(p, scope);
            scope.pop();
            mu_n(canon, body)
        }
    }
}

fn canon_process(p: &Process, scope: &mut Scope) -> Process {
    app(canon_term(&p.term, scope), canon_stack(&p.stack, scope))
}

/// Binder correspondence while walking two expressions in lockstep.
type Pairing = Vec<(Name, Name)>;

fn vars_match(pairing: &Pairing, a: &Name, b: &Name) -> bool {
    // innermost binder of a and innermost binder of b must be the same pair
    let left = pairing.iter().rposition(|(x, _)| x == a);
    let right = pairing.iter().rposition(|(_, y)| y == b);
    match (left, right) {
        (Some(i), Some(j)) => i == j,
        (None, None) => a == b,
        _ => false,
    }
}

fn alpha_stack(s1: &Stack, s2: &Stack, pairing: &mut Pairing) -> bool {
    match (s1, s2) {
        (Stack::Var(a), Stack::Var(b)) => vars_match(pairing, a, b),
        (Stack::Nil, Stack::Nil) => true,
        (Stack::Cons(m1, t1), Stack::Cons(m2, t2)) => alpha_term(m1, m2, pairing) && alpha_stack(t1, t2, pairing),
        (Stack::Cdr(t1), Stack::Cdr(t2)) => alpha_stack(t1, t2, pairing),
        _ => false,
    }
}

fn alpha_term(m1: &Term, m2: &Term, pairing: &mut Pairing) -> bool {
    match (m1, m2) {
        (Term::Car(s1), Term::Car(s2)) => alpha_stack(s1, s2, pairing),
        (Term::Mu(a, p1), Term::Mu(b, p2)) => {
            pairing.push((a.clone(), b.clone()));
            let eq = alpha_process(p1, p2, pairing);
            pairing.pop();
            eq
        }
        _ => false,
    }
}

fn alpha_process(p1: &Process, p2: &Process, pairing: &mut Pairing) -> bool {
    alpha_term(&p1.term, &p2.term, pairing) && alpha_stack(&p1.stack, &p2.stack, pairing)
}

/// Equality up to consistent renaming of bound names.
pub fn alpha_eq(e1: &Expr, e2: &Expr) -> bool {
    let mut pairing = Vec::new();
    match (e1, e2) {
        (Expr::Stack(a), Expr::Stack(b)) => alpha_stack(a, b, &mut pairing),
        (Expr::Term(a), Expr::Term(b)) => alpha_term(a, b, &mut pairing),
        (Expr::Process(a), Expr::Process(b)) => alpha_process(a, b, &mut pairing),
        _ => false,
    }
}

pub fn alpha_eq_stack(a: &Stack, b: &Stack) -> bool {
    alpha_stack(a, b, &mut Vec::new())
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    alpha_term(a, b, &mut Vec::new())
}

pub fn alpha_eq_process(a: &Process, b: &Process) -> bool {
    alpha_process(a, b, &mut Vec::new())
}
