//! The λμ-calculus: syntax, reduction, and the translation into the stack
//! calculus.
//!
//! λ-variables and names live in separate scopes in λμ but share one pool
//! of stack variables after translation. To keep that identification
//! faithful, every capture check below treats identifiers of both sorts
//! alike: a binder is renamed whenever its text is free, in either sort, in
//! what is being pushed underneath it.

use std::collections::BTreeSet;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::search::{self, JoinError};
use crate::syntax::{app, car, cdr, cons, fresh_name, mu_n, Expr, Name, Process, Stack, Term};
use crate::typesys::{Context, Formula, Grounding, MetaFormula, Unifier, UnifyError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LTerm {
    Var(Name),
    Lam(Name, Box<LTerm>),
    App(Box<LTerm>, Box<LTerm>),
    Mu(Name, Box<LProc>),
}

/// A named term `[name] body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LProc {
    pub name: Name,
    pub body: LTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LExpr {
    Term(LTerm),
    Proc(LProc),
}

impl From<LTerm> for LExpr {
    fn from(t: LTerm) -> Self {
        LExpr::Term(t)
    }
}

impl From<LProc> for LExpr {
    fn from(p: LProc) -> Self {
        LExpr::Proc(p)
    }
}

pub fn lvar(x: &str) -> LTerm {
    LTerm::Var(Name::new(x))
}

pub fn lam(x: &str, body: LTerm) -> LTerm {
    LTerm::Lam(Name::new(x), Box::new(body))
}

pub fn lapp(f: LTerm, arg: LTerm) -> LTerm {
    LTerm::App(Box::new(f), Box::new(arg))
}

pub fn lmu(a: &str, body: LProc) -> LTerm {
    LTerm::Mu(Name::new(a), Box::new(body))
}

pub fn named(a: &str, body: LTerm) -> LProc {
    LProc { name: Name::new(a), body }
}

/// `λf.μa.[a](f (λx.μd.[a]x))`.
pub fn callcc() -> LTerm {
    lam("f", lmu("a", named("a", lapp(lvar("f"), lam("x", lmu("d", named("a", lvar("x"))))))))
}

#[derive(Default)]
struct Idents {
    vars: BTreeSet<Name>,
    names: BTreeSet<Name>,
}

impl LTerm {
    fn collect_free(&self, bound_v: &mut Vec<Name>, bound_n: &mut Vec<Name>, out: &mut Idents) {
        match self {
            LTerm::Var(x) => {
                if !bound_v.contains(x) {
                    out.vars.insert(x.clone());
                }
            }
            LTerm::Lam(x, body) => {
                bound_v.push(x.clone());
                body.collect_free(bound_v, bound_n, out);
                bound_v.pop();
            }
            LTerm::App(f, a) => {
                f.collect_free(bound_v, bound_n, out);
                a.collect_free(bound_v, bound_n, out);
            }
            LTerm::Mu(a, p) => {
                bound_n.push(a.clone());
                p.collect_free(bound_v, bound_n, out);
                bound_n.pop();
            }
        }
    }

    fn free(&self) -> Idents {
        let mut out = Idents::default();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    /// Free λ-variables.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.free().vars
    }

    /// Free names.
    pub fn free_names(&self) -> BTreeSet<Name> {
        self.free().names
    }

    /// Free identifiers of both sorts.
    pub fn free_idents(&self) -> BTreeSet<Name> {
        let f = self.free();
        f.vars.into_iter().chain(f.names).collect()
    }

    /// Every identifier occurring anywhere, bound or free, of either sort.
    pub fn all_idents(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Name>) {
        match self {
            LTerm::Var(x) => {
                out.insert(x.clone());
            }
            LTerm::Lam(x, body) => {
                out.insert(x.clone());
                body.collect_all(out);
            }
            LTerm::App(f, a) => {
                f.collect_all(out);
                a.collect_all(out);
            }
            LTerm::Mu(a, p) => {
                out.insert(a.clone());
                p.collect_all(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LTerm::Var(_) => 1,
            LTerm::Lam(_, b) => 1 + b.size(),
            LTerm::App(f, a) => 1 + f.size() + a.size(),
            LTerm::Mu(_, p) => 1 + p.size(),
        }
    }
}

impl LProc {
    fn collect_free(&self, bound_v: &mut Vec<Name>, bound_n: &mut Vec<Name>, out: &mut Idents) {
        if !bound_n.contains(&self.name) {
            out.names.insert(self.name.clone());
        }
        self.body.collect_free(bound_v, bound_n, out);
    }

    fn free(&self) -> Idents {
        let mut out = Idents::default();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.free().vars
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        self.free().names
    }

    pub fn free_idents(&self) -> BTreeSet<Name> {
        let f = self.free();
        f.vars.into_iter().chain(f.names).collect()
    }

    pub fn all_idents(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Name>) {
        out.insert(self.name.clone());
        self.body.collect_all(out);
    }

    pub fn size(&self) -> usize {
        1 + self.body.size()
    }
}

impl LExpr {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            LExpr::Term(t) => t.free_vars(),
            LExpr::Proc(p) => p.free_vars(),
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        match self {
            LExpr::Term(t) => t.free_names(),
            LExpr::Proc(p) => p.free_names(),
        }
    }

    pub fn all_idents(&self) -> BTreeSet<Name> {
        match self {
            LExpr::Term(t) => t.all_idents(),
            LExpr::Proc(p) => p.all_idents(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LExpr::Term(t) => t.size(),
            LExpr::Proc(p) => p.size(),
        }
    }

    pub fn is_term(&self) -> bool {
        matches!(self, LExpr::Term(_))
    }
}

// Substitution machinery. All three operations share the same binder
// handling, parameterized by what happens at leaves.

#[derive(Clone, Copy)]
enum Sorted {
    Var,
    Name,
}

/// Renames the binder `x` of sort `sort` to a fresh identifier when `x`
/// occurs in `dangerous`, rewriting its bound occurrences in `body`.
fn freshen_lam(x: &Name, body: &LTerm, dangerous: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> (Name, LTerm) {
    if !dangerous.contains(x) {
        return (x.clone(), body.clone());
    }
    let mut avoid = body.all_idents();
    avoid.extend(dangerous.iter().cloned());
    avoid.extend(extra.iter().cloned());
    let y = fresh_name(&avoid, x);
    let renamed = subst_var_term(body, x, &LTerm::Var(y.clone()));
    (y, renamed)
}

fn freshen_mu(a: &Name, body: &LProc, dangerous: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> (Name, LProc) {
    if !dangerous.contains(a) {
        return (a.clone(), body.clone());
    }
    let mut avoid = body.all_idents();
    avoid.extend(dangerous.iter().cloned());
    avoid.extend(extra.iter().cloned());
    let b = fresh_name(&avoid, a);
    let renamed = rename_proc(body, a, &b);
    (b, renamed)
}

fn binder_hits(sort: Sorted, binder: &Name, target: &Name, bound_sort: Sorted) -> bool {
    matches!((sort, bound_sort), (Sorted::Var, Sorted::Var) | (Sorted::Name, Sorted::Name)) && binder == target
}

/// `t[s/x]` for a λ-variable `x`.
pub fn subst_var_term(t: &LTerm, x: &Name, s: &LTerm) -> LTerm {
    let danger = s.free_idents();
    let extra = BTreeSet::from([x.clone()]);
    subst_var_t(t, x, s, &danger, &extra)
}

fn subst_var_t(t: &LTerm, x: &Name, s: &LTerm, danger: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> LTerm {
    match t {
        LTerm::Var(y) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        LTerm::Lam(y, body) => {
            if binder_hits(Sorted::Var, y, x, Sorted::Var) || !body.free_vars().contains(x) {
                return t.clone();
            }
            let (y2, body2) = freshen_lam(y, body, danger, extra);
            LTerm::Lam(y2, Box::new(subst_var_t(&body2, x, s, danger, extra)))
        }
        LTerm::App(f, a) => {
            LTerm::App(Box::new(subst_var_t(f, x, s, danger, extra)), Box::new(subst_var_t(a, x, s, danger, extra)))
        }
        LTerm::Mu(a, p) => {
            if !p.free_vars().contains(x) {
                return t.clone();
            }
            let (a2, p2) = freshen_mu(a, p, danger, extra);
            LTerm::Mu(a2, Box::new(subst_var_p(&p2, x, s, danger, extra)))
        }
    }
}

fn subst_var_p(p: &LProc, x: &Name, s: &LTerm, danger: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> LProc {
    LProc { name: p.name.clone(), body: subst_var_t(&p.body, x, s, danger, extra) }
}

pub fn subst_var_proc(p: &LProc, x: &Name, s: &LTerm) -> LProc {
    let danger = s.free_idents();
    let extra = BTreeSet::from([x.clone()]);
    subst_var_p(p, x, s, &danger, &extra)
}

/// `e[beta/alpha]` on names.
pub fn rename_proc(p: &LProc, alpha: &Name, beta: &Name) -> LProc {
    let danger = BTreeSet::from([beta.clone()]);
    let extra = BTreeSet::from([alpha.clone()]);
    rename_p(p, alpha, beta, &danger, &extra)
}

pub fn rename_term(t: &LTerm, alpha: &Name, beta: &Name) -> LTerm {
    let danger = BTreeSet::from([beta.clone()]);
    let extra = BTreeSet::from([alpha.clone()]);
    rename_t(t, alpha, beta, &danger, &extra)
}

fn rename_p(p: &LProc, alpha: &Name, beta: &Name, danger: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> LProc {
    let name = if &p.name == alpha { beta.clone() } else { p.name.clone() };
    LProc { name, body: rename_t(&p.body, alpha, beta, danger, extra) }
}

fn rename_t(t: &LTerm, alpha: &Name, beta: &Name, danger: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> LTerm {
    match t {
        LTerm::Var(_) => t.clone(),
        LTerm::Lam(y, body) => {
            if !body.free_names().contains(alpha) {
                return t.clone();
            }
            let (y2, body2) = freshen_lam(y, body, danger, extra);
            LTerm::Lam(y2, Box::new(rename_t(&body2, alpha, beta, danger, extra)))
        }
        LTerm::App(f, a) => LTerm::App(
            Box::new(rename_t(f, alpha, beta, danger, extra)),
            Box::new(rename_t(a, alpha, beta, danger, extra)),
        ),
        LTerm::Mu(g, p) => {
            if binder_hits(Sorted::Name, g, alpha, Sorted::Name) || !p.free_names().contains(alpha) {
                return t.clone();
            }
            let (g2, p2) = freshen_mu(g, p, danger, extra);
            LTerm::Mu(g2, Box::new(rename_p(&p2, alpha, beta, danger, extra)))
        }
    }
}

/// Structural substitution `e<s/alpha>`: every `[alpha]t` becomes `[alpha](t s)`.
pub fn struct_subst(e: &LExpr, s: &LTerm, alpha: &Name) -> LExpr {
    match e {
        LExpr::Term(t) => LExpr::Term(struct_subst_term(t, s, alpha)),
        LExpr::Proc(p) => LExpr::Proc(struct_subst_proc(p, s, alpha)),
    }
}

pub fn struct_subst_term(t: &LTerm, s: &LTerm, alpha: &Name) -> LTerm {
    let danger = s.free_idents();
    let extra = BTreeSet::from([alpha.clone()]);
    ss_t(t, s, alpha, &danger, &extra)
}

pub fn struct_subst_proc(p: &LProc, s: &LTerm, alpha: &Name) -> LProc {
    let danger = s.free_idents();
    let extra = BTreeSet::from([alpha.clone()]);
    ss_p(p, s, alpha, &danger, &extra)
}

fn ss_p(p: &LProc, s: &LTerm, alpha: &Name, danger: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> LProc {
    let body = ss_t(&p.body, s, alpha, danger, extra);
    if &p.name == alpha {
        LProc { name: p.name.clone(), body: LTerm::App(Box::new(body), Box::new(s.clone())) }
    } else {
        LProc { name: p.name.clone(), body }
    }
}

fn ss_t(t: &LTerm, s: &LTerm, alpha: &Name, danger: &BTreeSet<Name>, extra: &BTreeSet<Name>) -> LTerm {
    match t {
        LTerm::Var(_) => t.clone(),
        LTerm::Lam(y, body) => {
            if !body.free_names().contains(alpha) {
                return t.clone();
            }
            let (y2, body2) = freshen_lam(y, body, danger, extra);
            LTerm::Lam(y2, Box::new(ss_t(&body2, s, alpha, danger, extra)))
        }
        LTerm::App(f, a) => {
            LTerm::App(Box::new(ss_t(f, s, alpha, danger, extra)), Box::new(ss_t(a, s, alpha, danger, extra)))
        }
        LTerm::Mu(g, p) => {
            if g == alpha || !p.free_names().contains(alpha) {
                return t.clone();
            }
            let (g2, p2) = freshen_mu(g, p, danger, extra);
            LTerm::Mu(g2, Box::new(ss_p(&p2, s, alpha, danger, extra)))
        }
    }
}

// α-equivalence through canonical binder names.

fn canon_t(t: &LTerm, vars: &mut Vec<(Name, Name)>, names: &mut Vec<(Name, Name)>) -> LTerm {
    let look = |scope: &Vec<(Name, Name)>, x: &Name| {
        scope.iter().rev().find(|(o, _)| o == x).map(|(_, c)| c.clone()).unwrap_or_else(|| x.clone())
    };
    match t {
        LTerm::Var(x) => LTerm::Var(look(vars, x)),
        LTerm::Lam(x, body) => {
            let c = Name::new(&format!("%v{}", vars.len() + names.len()));
            vars.push((x.clone(), c.clone()));
            let b = canon_t(body, vars, names);
            vars.pop();
            LTerm::Lam(c, Box::new(b))
        }
        LTerm::App(f, a) => LTerm::App(Box::new(canon_t(f, vars, names)), Box::new(canon_t(a, vars, names))),
        LTerm::Mu(a, p) => {
            let c = Name::new(&format!("%n{}", vars.len() + names.len()));
            names.push((a.clone(), c.clone()));
            let q = canon_p(p, vars, names);
            names.pop();
            LTerm::Mu(c, Box::new(q))
        }
    }
}

fn canon_p(p: &LProc, vars: &mut Vec<(Name, Name)>, names: &mut Vec<(Name, Name)>) -> LProc {
    let name = names.iter().rev().find(|(o, _)| *o == p.name).map(|(_, c)| c.clone()).unwrap_or_else(|| p.name.clone());
    LProc { name, body: canon_t(&p.body, vars, names) }
}

impl LExpr {
    /// Representative of the α-class.
    pub fn canonical(&self) -> LExpr {
        match self {
            LExpr::Term(t) => LExpr::Term(canon_t(t, &mut Vec::new(), &mut Vec::new())),
            LExpr::Proc(p) => LExpr::Proc(canon_p(p, &mut Vec::new(), &mut Vec::new())),
        }
    }
}

pub fn lmu_alpha_eq(a: &LExpr, b: &LExpr) -> bool {
    a.canonical() == b.canonical()
}

// Reduction.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LRule {
    Beta,
    MuStruct,
    Rho,
    Theta,
    Eta,
    Nu,
}

impl LRule {
    pub const ALL: [LRule; 6] = [LRule::Beta, LRule::MuStruct, LRule::Rho, LRule::Theta, LRule::Eta, LRule::Nu];

    pub fn is_extensional(self) -> bool {
        matches!(self, LRule::Eta | LRule::Nu)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LRule::Beta => "beta",
            LRule::MuStruct => "mu",
            LRule::Rho => "rho",
            LRule::Theta => "theta",
            LRule::Eta => "eta",
            LRule::Nu => "nu",
        }
    }
}

impl fmt::Display for LRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LStep {
    pub rule: LRule,
    /// Child indices: a λ or μ body and the body of a named term are 0, an
    /// application has function 0 and argument 1.
    pub position: Vec<usize>,
    pub reduct: LExpr,
}

fn contract_term(t: &LTerm, ext: bool) -> Vec<(LRule, LTerm)> {
    let mut out = Vec::new();
    match t {
        LTerm::App(f, s) => match f.as_ref() {
            LTerm::Lam(x, body) => out.push((LRule::Beta, subst_var_term(body, x, s))),
            LTerm::Mu(a, p) => {
                // the binder must not capture identifiers free in the argument
                let (a, p) = if s.free_idents().contains(a) {
                    let mut avoid = p.all_idents();
                    avoid.extend(s.all_idents());
                    avoid.insert(a.clone());
                    let fresh = fresh_name(&avoid, a);
                    let renamed = rename_proc(p, a, &fresh);
                    (fresh, renamed)
                } else {
                    (a.clone(), (**p).clone())
                };
                let body = struct_subst_proc(&p, s, &a);
                out.push((LRule::MuStruct, LTerm::Mu(a, Box::new(body))));
            }
            _ => {}
        },
        LTerm::Mu(a, p) => {
            if &p.name == a && !p.body.free_names().contains(a) {
                out.push((LRule::Theta, p.body.clone()));
            }
            if ext {
                let mut avoid = p.all_idents();
                avoid.insert(a.clone());
                let x = fresh_name(&avoid, &Name::new("x"));
                let inner = struct_subst_proc(p, &LTerm::Var(x.clone()), a);
                out.push((LRule::Nu, LTerm::Lam(x, Box::new(LTerm::Mu(a.clone(), Box::new(inner))))));
            }
        }
        LTerm::Lam(x, body) if ext => {
            if let LTerm::App(t0, arg) = body.as_ref() {
                if matches!(arg.as_ref(), LTerm::Var(y) if y == x) && !t0.free_vars().contains(x) {
                    out.push((LRule::Eta, (**t0).clone()));
                }
            }
        }
        _ => {}
    }
    out
}

fn contract_proc(p: &LProc) -> Option<(LRule, LProc)> {
    match &p.body {
        LTerm::Mu(a, q) => Some((LRule::Rho, rename_proc(q, a, &p.name))),
        _ => None,
    }
}

type LFound<T> = (LRule, Vec<usize>, T);

fn pre<T>(i: usize, v: Vec<LFound<T>>) -> impl Iterator<Item = LFound<T>> {
    v.into_iter().map(move |(r, mut pos, x)| {
        pos.insert(0, i);
        (r, pos, x)
    })
}

fn walk_t(t: &LTerm, ext: bool) -> Vec<LFound<LTerm>> {
    let mut out: Vec<LFound<LTerm>> = contract_term(t, ext).into_iter().map(|(r, x)| (r, vec![], x)).collect();
    match t {
        LTerm::Var(_) => {}
        LTerm::Lam(x, body) => {
            out.extend(pre(0, walk_t(body, ext)).map(|(r, p, b)| (r, p, LTerm::Lam(x.clone(), Box::new(b)))));
        }
        LTerm::App(f, a) => {
            out.extend(pre(0, walk_t(f, ext)).map(|(r, p, f2)| (r, p, LTerm::App(Box::new(f2), a.clone()))));
            out.extend(pre(1, walk_t(a, ext)).map(|(r, p, a2)| (r, p, LTerm::App(f.clone(), Box::new(a2)))));
        }
        LTerm::Mu(a, q) => {
            out.extend(pre(0, walk_p(q, ext)).map(|(r, p, q2)| (r, p, LTerm::Mu(a.clone(), Box::new(q2)))));
        }
    }
    out
}

fn walk_p(p: &LProc, ext: bool) -> Vec<LFound<LProc>> {
    let mut out: Vec<LFound<LProc>> = contract_proc(p).into_iter().map(|(r, x)| (r, vec![], x)).collect();
    out.extend(pre(0, walk_t(&p.body, ext)).map(|(r, pos, b)| (r, pos, LProc { name: p.name.clone(), body: b })));
    out
}

/// All one-step reducts in leftmost-outermost order. At a μ-abstraction θ
/// is listed before ν.
pub fn lmu_one_step(e: &LExpr, extensional: bool) -> Vec<LStep> {
    match e {
        LExpr::Term(t) => walk_t(t, extensional)
            .into_iter()
            .map(|(rule, position, x)| LStep { rule, position, reduct: LExpr::Term(x) })
            .collect(),
        LExpr::Proc(p) => walk_p(p, extensional)
            .into_iter()
            .map(|(rule, position, x)| LStep { rule, position, reduct: LExpr::Proc(x) })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LOutcome {
    NormalForm(LExpr),
    StepLimitExceeded(LExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LNormalizeResult {
    pub outcome: LOutcome,
    pub trace: Vec<LStep>,
}

/// Leftmost-outermost normalization. ν applies to every μ-abstraction, so
/// with `extensional` set most terms have no normal form.
pub fn lmu_normalize(e: &LExpr, extensional: bool, max_steps: usize) -> LNormalizeResult {
    let mut current = e.clone();
    let mut trace = Vec::new();
    loop {
        let Some(step) = lmu_one_step(&current, extensional).into_iter().next() else {
            return LNormalizeResult { outcome: LOutcome::NormalForm(current), trace };
        };
        if trace.len() >= max_steps {
            return LNormalizeResult { outcome: LOutcome::StepLimitExceeded(current), trace };
        }
        current = step.reduct.clone();
        trace.push(step);
    }
}

pub fn lmu_joinable(e1: &LExpr, e2: &LExpr, extensional: bool, bound: usize) -> Result<LExpr, JoinError> {
    if e1.is_term() != e2.is_term() {
        let sort = |e: &LExpr| if e.is_term() { "term" } else { "named term" }.to_string();
        return Err(JoinError::SortMismatch { left: sort(e1), right: sort(e2) });
    }
    let succ = |e: &LExpr| lmu_one_step(e, extensional).into_iter().map(|s| s.reduct).collect();
    search::join(e1.clone(), e2.clone(), bound, succ, LExpr::canonical)
}

// Translation into the stack calculus.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Treat `[top] t` as `t * nil`.
    pub top: bool,
}

/// How identifiers of the two sorts become stack variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Naming {
    /// Identifiers keep their text.
    Identity,
    /// λ-variables get an `x_` prefix and names an `a_` prefix.
    Prefixed,
}

impl Naming {
    pub fn var(self, x: &Name) -> Name {
        match self {
            Naming::Identity => x.clone(),
            Naming::Prefixed => Name::new(&format!("x_{x}")),
        }
    }

    pub fn name(self, a: &Name) -> Name {
        match self {
            Naming::Identity => a.clone(),
            Naming::Prefixed => Name::new(&format!("a_{a}")),
        }
    }

    /// Keeping the text is faithful when every occurrence resolves, by
    /// innermost binder regardless of sort, to a binder of its own sort,
    /// and no identifier is free in both sorts.
    pub fn for_expr(e: &LExpr, opts: TranslateOptions) -> Naming {
        let top = Name::new("top");
        let mut scope: Vec<(Name, Sorted)> = Vec::new();
        let mut free_v = BTreeSet::new();
        let mut free_n = BTreeSet::new();
        let ok = match e {
            LExpr::Term(t) => faithful_t(t, &mut scope, &mut free_v, &mut free_n),
            LExpr::Proc(p) => faithful_p(p, &mut scope, &mut free_v, &mut free_n),
        };
        if opts.top {
            free_n.remove(&top);
        }
        if ok && free_v.is_disjoint(&free_n) && !(opts.top && free_v.contains(&top)) {
            Naming::Identity
        } else {
            Naming::Prefixed
        }
    }
}

fn resolve(scope: &[(Name, Sorted)], x: &Name) -> Option<Sorted> {
    scope.iter().rev().find(|(n, _)| n == x).map(|(_, s)| *s)
}

fn faithful_t(
    t: &LTerm,
    scope: &mut Vec<(Name, Sorted)>,
    free_v: &mut BTreeSet<Name>,
    free_n: &mut BTreeSet<Name>,
) -> bool {
    match t {
        LTerm::Var(x) => match resolve(scope, x) {
            Some(Sorted::Var) => true,
            Some(Sorted::Name) => false,
            None => {
                free_v.insert(x.clone());
                true
            }
        },
        LTerm::Lam(x, body) => {
            scope.push((x.clone(), Sorted::Var));
            let ok = faithful_t(body, scope, free_v, free_n);
            scope.pop();
            ok
        }
        LTerm::App(f, a) => faithful_t(f, scope, free_v, free_n) && faithful_t(a, scope, free_v, free_n),
        LTerm::Mu(a, p) => {
            scope.push((a.clone(), Sorted::Name));
            let ok = faithful_p(p, scope, free_v, free_n);
            scope.pop();
            ok
        }
    }
}

fn faithful_p(
    p: &LProc,
    scope: &mut Vec<(Name, Sorted)>,
    free_v: &mut BTreeSet<Name>,
    free_n: &mut BTreeSet<Name>,
) -> bool {
    let here = match resolve(scope, &p.name) {
        Some(Sorted::Name) => true,
        Some(Sorted::Var) => false,
        None => {
            free_n.insert(p.name.clone());
            true
        }
    };
    here && faithful_t(&p.body, scope, free_v, free_n)
}

struct Translator {
    naming: Naming,
    opts: TranslateOptions,
    fresh_base: Name,
}

impl Translator {
    fn term(&self, t: &LTerm) -> Term {
        match t {
            LTerm::Var(x) => {
                let x = self.naming.var(x);
                let b = fresh_name(&BTreeSet::from([x.clone()]), &self.fresh_base);
                mu_n(b.clone(), app(car(Stack::Var(x)), Stack::Var(b)))
            }
            LTerm::Lam(x, body) => {
                let x = self.naming.var(x);
                mu_n(x.clone(), app(self.term(body), cdr(Stack::Var(x))))
            }
            LTerm::App(f, s) => {
                let tf = self.term(f);
                let ts = self.term(s);
                let mut avoid = tf.free_vars();
                avoid.extend(ts.free_vars());
                let b = fresh_name(&avoid, &self.fresh_base);
                mu_n(b.clone(), app(tf, cons(ts, Stack::Var(b))))
            }
            LTerm::Mu(a, p) => mu_n(self.naming.name(a), self.proc(p)),
        }
    }

    fn proc(&self, p: &LProc) -> Process {
        let body = self.term(&p.body);
        if self.opts.top && p.name.as_str() == "top" {
            app(body, Stack::Nil)
        } else {
            app(body, Stack::Var(self.naming.name(&p.name)))
        }
    }
}

/// The translation together with the naming it used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub expr: Expr,
    pub naming: Naming,
}

pub fn translate_with(e: &LExpr, opts: TranslateOptions) -> Translation {
    let naming = Naming::for_expr(e, opts);
    let tr = Translator { naming, opts, fresh_base: Name::new("b") };
    let expr = match e {
        LExpr::Term(t) => Expr::Term(tr.term(t)),
        LExpr::Proc(p) => Expr::Process(tr.proc(p)),
    };
    Translation { expr, naming }
}

pub fn translate(e: &LExpr) -> Expr {
    translate_with(e, TranslateOptions::default()).expr
}

pub fn translate_term(t: &LTerm) -> Term {
    match translate(&LExpr::Term(t.clone())) {
        Expr::Term(m) => m,
        _ => unreachable!("terms translate to terms"),
    }
}

pub fn translate_proc(p: &LProc) -> Process {
    match translate(&LExpr::Proc(p.clone())) {
        Expr::Process(q) => q,
        _ => unreachable!("named terms translate to processes"),
    }
}

/// The translation followed by normalization (non-extensional), which is
/// the compact form in which translated terms are usually displayed.
/// `None` when the budget runs out.
pub fn translate_normalized(e: &LExpr, max_steps: usize) -> Option<Expr> {
    let r = crate::reduction::normalize(&translate(e), false, max_steps);
    r.normal_form().cloned()
}

/// Gives each `x : A` the stream type `A -> c_i`, with `c_1, c_2, ...`
/// fresh atoms distinct from those of `gamma`.
pub fn translate_typed_context(gamma: &Context) -> Context {
    translate_typed_context_with(gamma, Naming::Identity)
}

pub fn translate_typed_context_with(gamma: &Context, naming: Naming) -> Context {
    let avoid = gamma.atoms();
    let mut supply = (1u64..).map(|i| Name::new(&format!("c{i}"))).filter(|n| !avoid.contains(n));
    let mut out = Context::new();
    for (x, a) in gamma.iter() {
        let c = supply.next().expect("atom supply is unbounded");
        out.push(naming.var(x), Formula::arrow(a.clone(), Formula::Atom(c)));
    }
    out
}

/// The stack context `translate_typed_context(gamma), delta` for a judgement
/// about `e`, under the naming its translation uses.
pub fn translated_judgement_context(e: &LExpr, gamma: &Context, delta: &Context, opts: TranslateOptions) -> Context {
    let naming = Naming::for_expr(e, opts);
    let mut ctx = translate_typed_context_with(gamma, naming);
    for (a, f) in delta.iter() {
        ctx.push(naming.name(a), f.clone());
    }
    ctx
}

// Typing oracle for the implicational λμ system.

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LTypeError {
    #[error("unbound λ-variable `{0}`")]
    UnboundVariable(Name),
    #[error("unbound name `{0}`")]
    UnboundName(Name),
    #[error("cannot unify `{0}` with `{1}`")]
    Mismatch(String, String),
    #[error("occurs check on `?{0}` in `{1}`")]
    Occurs(u32, String),
}

impl From<UnifyError> for LTypeError {
    fn from(e: UnifyError) -> Self {
        match e {
            UnifyError::Mismatch(a, b) => LTypeError::Mismatch(a.to_string(), b.to_string()),
            UnifyError::Occurs(i, t) => LTypeError::Occurs(i, t.to_string()),
        }
    }
}

struct LInference {
    u: Unifier,
    vars: Vec<(Name, MetaFormula)>,
    names: Vec<(Name, MetaFormula)>,
    open: bool,
    free_vars: Vec<(Name, MetaFormula)>,
    free_names: Vec<(Name, MetaFormula)>,
}

impl LInference {
    fn new(gamma: &Context, delta: &Context, open: bool) -> Self {
        LInference {
            u: Unifier::new(),
            vars: gamma.iter().map(|(n, f)| (n.clone(), f.into())).collect(),
            names: delta.iter().map(|(n, f)| (n.clone(), f.into())).collect(),
            open,
            free_vars: Vec::new(),
            free_names: Vec::new(),
        }
    }

    fn lookup(&mut self, x: &Name, is_var: bool) -> Result<MetaFormula, LTypeError> {
        let (scope, free) =
            if is_var { (&self.vars, &mut self.free_vars) } else { (&self.names, &mut self.free_names) };
        if let Some((_, t)) = scope.iter().rev().find(|(n, _)| n == x) {
            return Ok(t.clone());
        }
        if let Some((_, t)) = free.iter().find(|(n, _)| n == x) {
            return Ok(t.clone());
        }
        if !self.open {
            return Err(if is_var {
                LTypeError::UnboundVariable(x.clone())
            } else {
                LTypeError::UnboundName(x.clone())
            });
        }
        let m = self.u.fresh();
        free.push((x.clone(), m.clone()));
        Ok(m)
    }

    fn term(&mut self, t: &LTerm) -> Result<MetaFormula, LTypeError> {
        match t {
            LTerm::Var(x) => self.lookup(x, true),
            LTerm::Lam(x, body) => {
                let a = self.u.fresh();
                self.vars.push((x.clone(), a.clone()));
                let b = self.term(body);
                self.vars.pop();
                Ok(MetaFormula::arrow(a, b?))
            }
            LTerm::App(f, s) => {
                let tf = self.term(f)?;
                let ts = self.term(s)?;
                let b = self.u.fresh();
                self.u.unify(&tf, &MetaFormula::arrow(ts, b.clone()))?;
                Ok(b)
            }
            LTerm::Mu(a, p) => {
                let ta = self.u.fresh();
                self.names.push((a.clone(), ta.clone()));
                let r = self.proc(p);
                self.names.pop();
                r?;
                Ok(ta)
            }
        }
    }

    fn proc(&mut self, p: &LProc) -> Result<(), LTypeError> {
        let t = self.term(&p.body)?;
        let a = self.lookup(&p.name, false)?;
        self.u.unify(&t, &a)?;
        Ok(())
    }
}

/// `gamma |- t : b | delta` is derivable.
pub fn lmu_check_term(t: &LTerm, b: &Formula, gamma: &Context, delta: &Context) -> bool {
    let mut inf = LInference::new(gamma, delta, false);
    match inf.term(t) {
        Ok(m) => inf.u.unify(&m, &b.into()).is_ok(),
        Err(_) => false,
    }
}

pub fn lmu_check_proc(p: &LProc, gamma: &Context, delta: &Context) -> bool {
    LInference::new(gamma, delta, false).proc(p).is_ok()
}

pub fn lmu_infer_term(t: &LTerm, gamma: &Context, delta: &Context) -> Result<Formula, LTypeError> {
    let mut inf = LInference::new(gamma, delta, false);
    let m = inf.term(t)?;
    let mut avoid = gamma.atoms();
    avoid.extend(delta.atoms());
    Ok(Grounding::new(avoid).ground(&inf.u, &m))
}

/// A principal typing of an open λμ-expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LTyping {
    pub gamma: Context,
    pub delta: Context,
    /// `None` for named terms.
    pub formula: Option<Formula>,
}

pub fn lmu_principal(e: &LExpr) -> Result<LTyping, LTypeError> {
    let mut inf = LInference::new(&Context::new(), &Context::new(), true);
    let t = match e {
        LExpr::Term(t) => Some(inf.term(t)?),
        LExpr::Proc(p) => {
            inf.proc(p)?;
            None
        }
    };
    let mut g = Grounding::new(BTreeSet::new());
    let formula = t.map(|t| g.ground(&inf.u, &t));
    let gamma = Context::from_entries(inf.free_vars.iter().map(|(n, m)| (n.clone(), g.ground(&inf.u, m))));
    let delta = Context::from_entries(inf.free_names.iter().map(|(n, m)| (n.clone(), g.ground(&inf.u, m))));
    Ok(LTyping { gamma, delta, formula })
}

// Random λμ-expressions for property tests and corpora.

/// Generates λμ-terms over disjoint identifier stems: λ-variables from
/// `x, y, z, f` and names from `a, b, c, d`.
pub struct LGen {
    rng: StdRng,
}

const VAR_POOL: [&str; 4] = ["x", "y", "z", "f"];
const NAME_POOL: [&str; 4] = ["a", "b", "c", "d"];

impl LGen {
    pub fn new(seed: u64) -> Self {
        LGen { rng: StdRng::seed_from_u64(seed) }
    }

    pub fn term(&mut self, depth: usize) -> LTerm {
        let choice = if depth == 0 { 0 } else { self.rng.gen_range(0..10) };
        match choice {
            0 | 1 => lvar(VAR_POOL[self.rng.gen_range(0..VAR_POOL.len())]),
            2..=4 => lam(VAR_POOL[self.rng.gen_range(0..VAR_POOL.len())], self.term(depth - 1)),
            5..=7 => lapp(self.term(depth - 1), self.term(depth - 1)),
            _ => lmu(NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())], self.proc(depth - 1)),
        }
    }

    pub fn proc(&mut self, depth: usize) -> LProc {
        let a = NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())];
        LProc { name: Name::new(a), body: self.term(depth) }
    }

    pub fn expr(&mut self, depth: usize) -> LExpr {
        if self.rng.gen_bool(0.8) {
            LExpr::Term(self.term(depth))
        } else {
            LExpr::Proc(self.proc(depth))
        }
    }

    /// A term headed by a redex of `rule` at the root, or at the root's
    /// body for ρ.
    pub fn redex(&mut self, rule: LRule, depth: usize) -> LExpr {
        let d = depth.max(1);
        match rule {
            LRule::Beta => {
                let x = VAR_POOL[self.rng.gen_range(0..VAR_POOL.len())];
                LExpr::Term(lapp(lam(x, self.term(d)), self.term(d - 1)))
            }
            LRule::MuStruct => {
                let a = NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())];
                LExpr::Term(lapp(lmu(a, self.named_often(a, d)), self.term(d - 1)))
            }
            LRule::Rho => {
                let a = NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())];
                let b = NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())];
                LExpr::Proc(named(b, lmu(a, self.named_often(a, d))))
            }
            LRule::Theta => {
                let a = NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())];
                let body = loop {
                    let t = self.term(d);
                    if !t.free_names().contains(&Name::new(a)) {
                        break t;
                    }
                };
                LExpr::Term(lmu(a, named(a, body)))
            }
            LRule::Eta => {
                let x = VAR_POOL[self.rng.gen_range(0..VAR_POOL.len())];
                let t = loop {
                    let t = self.term(d);
                    if !t.free_vars().contains(&Name::new(x)) {
                        break t;
                    }
                };
                LExpr::Term(lam(x, lapp(t, lvar(x))))
            }
            LRule::Nu => {
                let a = NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())];
                LExpr::Term(lmu(a, self.named_often(a, d)))
            }
        }
    }

    // a named term whose body mentions `a` with decent probability
    fn named_often(&mut self, a: &str, depth: usize) -> LProc {
        let name = if self.rng.gen_bool(0.6) { a } else { NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())] };
        let body = if self.rng.gen_bool(0.5) {
            lmu(NAME_POOL[self.rng.gen_range(0..NAME_POOL.len())], named(a, self.term(depth.saturating_sub(1))))
        } else {
            self.term(depth)
        };
        named(name, body)
    }
}
