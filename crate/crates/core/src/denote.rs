//! Bounded relational semantics over the reflexive object of finitely
//! supported sequences of finite multisets.
//!
//! The interpretation is computed inside a finite universe: every element and
//! every tuple component of a result lies in it. Membership of a candidate
//! pair is decided clause by clause, so intermediate elements built by the
//! car, cdr and cons clauses may leave the universe; only the existential of
//! the process clause ranges over the universe alone. The result is the
//! restriction of the true relation whenever process witnesses fit the
//! bounds, and an under-approximation otherwise.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde_json::Value;
use thiserror::Error;

use crate::syntax::{Name, Process, Stack, Term};

/// A finite multiset, kept sorted.
pub type Multiset = Vec<DElem>;

/// An element: a sequence of multisets with no trailing empty entries. The
/// empty sequence is `∗`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DElem {
    entries: Vec<Multiset>,
}

impl DElem {
    pub fn star() -> Self {
        DElem { entries: Vec::new() }
    }

    /// Builds the canonical element: multisets sorted, trailing empties dropped.
    pub fn from_entries(mut entries: Vec<Multiset>) -> Self {
        for m in &mut entries {
            m.sort();
        }
        while entries.last().is_some_and(|m| m.is_empty()) {
            entries.pop();
        }
        DElem { entries }
    }

    pub fn entries(&self) -> &[Multiset] {
        &self.entries
    }

    pub fn is_star(&self) -> bool {
        self.entries.is_empty()
    }

    /// `∗` has depth 1; each nesting adds one.
    pub fn depth(&self) -> usize {
        1 + self.entries.iter().flatten().map(DElem::depth).max().unwrap_or(0)
    }

    /// Splits `a :: σ` into its head multiset and tail. `∗` splits as `[] :: ∗`.
    pub fn uncons(&self) -> (Multiset, DElem) {
        match self.entries.split_first() {
            None => (Vec::new(), DElem::star()),
            Some((head, tail)) => (head.clone(), DElem { entries: tail.to_vec() }),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(|m| Value::Array(m.iter().map(DElem::to_json).collect())).collect())
    }
}

pub fn d_star() -> DElem {
    DElem::star()
}

/// Componentwise multiset union.
pub fn d_sum(s: &DElem, t: &DElem) -> DElem {
    let len = s.entries.len().max(t.entries.len());
    let entries = (0..len)
        .map(|i| {
            let mut m: Multiset = s.entries.get(i).cloned().unwrap_or_default();
            m.extend(t.entries.get(i).cloned().unwrap_or_default());
            m
        })
        .collect();
    DElem::from_entries(entries)
}

/// `a :: σ`.
pub fn d_cons(a: Multiset, s: &DElem) -> DElem {
    let mut entries = Vec::with_capacity(s.entries.len() + 1);
    entries.push(a);
    entries.extend(s.entries.iter().cloned());
    DElem::from_entries(entries)
}

fn cmp_multiset(a: &Multiset, b: &Multiset) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

impl Ord for DElem {
    /// Length first, then entries left to right; multisets likewise.
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.len().cmp(&other.entries.len()).then_with(|| {
            for (a, b) in self.entries.iter().zip(&other.entries) {
                match cmp_multiset(a, b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for DElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.entries {
            f.write_str("[")?;
            for (i, e) in m.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]::")?;
        }
        f.write_str("∗")
    }
}

impl fmt::Debug for DElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("malformed element at byte {offset}")]
pub struct DElemParseError {
    pub offset: usize,
}

struct ElemParser<'a> {
    text: &'a str,
    pos: usize,
}

impl ElemParser<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self) -> Result<T, DElemParseError> {
        Err(DElemParseError { offset: self.pos })
    }

    fn elem(&mut self) -> Result<DElem, DElemParseError> {
        let mut entries = Vec::new();
        loop {
            if self.eat("∗") || self.eat("*") {
                return Ok(DElem::from_entries(entries));
            }
            if !self.eat("[") {
                return self.fail();
            }
            let mut m = Vec::new();
            if !self.eat("]") {
                loop {
                    m.push(self.elem()?);
                    if self.eat("]") {
                        break;
                    }
                    if !self.eat(",") {
                        return self.fail();
                    }
                }
            }
            if !self.eat("::") {
                return self.fail();
            }
            entries.push(m);
        }
    }
}

impl FromStr for DElem {
    type Err = DElemParseError;

    /// Accepts the printed form; `*` may stand for `∗`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut p = ElemParser { text, pos: 0 };
        let e = p.elem()?;
        p.skip_ws();
        if p.pos != text.len() {
            return p.fail();
        }
        Ok(e)
    }
}

pub type DTuple = Vec<DElem>;

/// Every element of depth at most `depth_bound` whose sequences, at every
/// level, have length and total cardinality at most `size_bound`.
#[derive(Clone, Debug)]
pub struct Universe {
    elements: Vec<DElem>,
    members: HashSet<DElem>,
    pub depth_bound: usize,
    pub size_bound: usize,
}

pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_SIZE: usize = 2;

/// Multisets of size at most `max` over `pool`, each sorted.
fn multisets(pool: &[DElem], max: usize) -> Vec<Multiset> {
    fn go(pool: &[DElem], from: usize, left: usize, cur: &mut Multiset, out: &mut Vec<Multiset>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i].clone());
            go(pool, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, 0, max, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate(depth_bound: usize, size_bound: usize) -> Universe {
    let mut level: Vec<DElem> = Vec::new();
    for _ in 0..depth_bound {
        let ms = multisets(&level, size_bound);
        let mut next = Vec::new();
        fn seqs(ms: &[Multiset], len: usize, budget: usize, cur: &mut Vec<Multiset>, out: &mut Vec<DElem>) {
            if cur.len() == len {
                if cur.last().is_none_or(|m| !m.is_empty()) {
                    out.push(DElem::from_entries(cur.clone()));
                }
                return;
            }
            for m in ms.iter().filter(|m| m.len() <= budget) {
                cur.push(m.clone());
                seqs(ms, len, budget - m.len(), cur, out);
                cur.pop();
            }
        }
        for len in 0..=size_bound {
            seqs(&ms, len, size_bound, &mut Vec::new(), &mut next);
        }
        next.sort();
        next.dedup();
        level = next;
    }
    let members = level.iter().cloned().collect();
    Universe { elements: level, members, depth_bound, size_bound }
}

impl Universe {
    pub fn elements(&self) -> &[DElem] {
        &self.elements
    }

    pub fn contains(&self, e: &DElem) -> bool {
        self.members.contains(e)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A relation between elements and tuples indexed by `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpSet {
    pub vars: Vec<Name>,
    pub pairs: BTreeSet<(DElem, DTuple)>,
}

/// A process denotes a set of tuples (pairs with a unit first component).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcInterp {
    pub vars: Vec<Name>,
    pub tuples: BTreeSet<DTuple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DenoteError {
    #[error("variable `{0}` is not among the interpretation variables")]
    UnboundVariable(Name),
}

/// All ways to write `e` as `a + b`, each multiset split into two
/// sub-multisets.
fn splits(e: &DElem) -> Vec<(DElem, DElem)> {
    let mut acc: Vec<(Vec<Multiset>, Vec<Multiset>)> = vec![(Vec::new(), Vec::new())];
    for m in &e.entries {
        // runs of equal elements, the multiset being sorted
        let mut runs: Vec<(&DElem, usize)> = Vec::new();
        for x in m {
            match runs.last_mut() {
                Some((y, n)) if *y == x => *n += 1,
                _ => runs.push((x, 1)),
            }
        }
        let mut halves: Vec<(Multiset, Multiset)> = vec![(Vec::new(), Vec::new())];
        for (x, n) in runs {
            halves = halves
                .into_iter()
                .flat_map(|(l, r)| {
                    (0..=n).map(move |k| {
                        let (mut l, mut r) = (l.clone(), r.clone());
                        l.extend(std::iter::repeat_n(x.clone(), k));
                        r.extend(std::iter::repeat_n(x.clone(), n - k));
                        (l, r)
                    })
                })
                .collect();
        }
        acc = acc
            .into_iter()
            .flat_map(|(l, r)| {
                halves.iter().map(move |(hl, hr)| {
                    let (mut l, mut r) = (l.clone(), r.clone());
                    l.push(hl.clone());
                    r.push(hr.clone());
                    (l, r)
                })
            })
            .collect();
    }
    acc.into_iter().map(|(l, r)| (DElem::from_entries(l), DElem::from_entries(r))).collect()
}

/// Splits of a tuple between two sides; `left[i]` and `right[i]` say
/// whether slot `i` is free on that side, and a slot absent from a side
/// must give it the unit.
fn tuple_splits(t: &[DElem], left: &[bool], right: &[bool]) -> Vec<(DTuple, DTuple)> {
    let mut acc: Vec<(DTuple, DTuple)> = vec![(Vec::new(), Vec::new())];
    for (i, e) in t.iter().enumerate() {
        let parts = match (left[i], right[i]) {
            _ if e.is_star() => vec![(DElem::star(), DElem::star())],
            (true, true) => splits(e),
            (true, false) => vec![(e.clone(), DElem::star())],
            (false, true) => vec![(DElem::star(), e.clone())],
            (false, false) => return Vec::new(),
        };
        acc = acc
            .into_iter()
            .flat_map(|(l, r)| {
                parts.iter().map(move |(a, b)| {
                    let (mut l, mut r) = (l.clone(), r.clone());
                    l.push(a.clone());
                    r.push(b.clone());
                    (l, r)
                })
            })
            .collect();
    }
    acc
}

/// Slots whose variable occurs free, the innermost binding of a name
/// shadowing the outer ones.
fn live_slots(free: &BTreeSet<Name>, vars: &[Name]) -> Vec<bool> {
    vars.iter().enumerate().map(|(i, v)| free.contains(v) && !vars[i + 1..].contains(v)).collect()
}

/// Multiset inclusion on every level.
fn below(e: &DElem, f: &DElem) -> bool {
    e.entries.len() <= f.entries.len()
        && e.entries.iter().zip(&f.entries).all(|(small, big)| {
            let mut rest = big.iter();
            // both sides are sorted
            small.iter().all(|x| rest.by_ref().any(|y| y == x))
        })
}

/// A cheap necessary condition for `(e, t')` to lie in the interpretation
/// of a stack for some `t'` below `t`.
fn admits_stack(s: &Stack, vars: &[Name], t: &[DElem], e: &DElem) -> bool {
    match s {
        Stack::Nil => e.is_star(),
        Stack::Var(a) => vars.iter().rposition(|v| v == a).is_none_or(|i| below(e, &t[i])),
        Stack::Cdr(inner) => admits_stack(inner, vars, t, &d_cons(Vec::new(), e)),
        Stack::Cons(m, tail) => {
            let (heads, rest) = e.uncons();
            admits_stack(tail, vars, t, &rest) && heads.iter().all(|h| admits_term(m, vars, t, h))
        }
    }
}

fn admits_term(m: &Term, vars: &[Name], t: &[DElem], e: &DElem) -> bool {
    match m {
        Term::Car(s) => admits_stack(s, vars, t, &d_cons(vec![e.clone()], &DElem::star())),
        Term::Mu(b, p) => e.is_star() || p.free_vars().contains(b),
    }
}

/// Membership in the interpretation, decided clause by clause. Only the
/// existential of the process clause is bounded, ranging over the universe.
/// Subexpressions are identified by address, which fixes their variables.
struct Interp<'u> {
    u: &'u Universe,
    stacks: RefCell<HashMap<(usize, DElem, DTuple), bool>>,
    procs: RefCell<HashMap<(usize, DTuple), bool>>,
    live: RefCell<HashMap<usize, Rc<Vec<bool>>>>,
}

fn is_unit(t: &[DElem]) -> bool {
    t.iter().all(DElem::is_star)
}

impl<'u> Interp<'u> {
    fn new(u: &'u Universe) -> Self {
        Interp { u, stacks: RefCell::default(), procs: RefCell::default(), live: RefCell::default() }
    }

    fn live_of(&self, addr: usize, vars: &[Name], free: impl FnOnce() -> BTreeSet<Name>) -> Rc<Vec<bool>> {
        if let Some(l) = self.live.borrow().get(&addr) {
            return l.clone();
        }
        let l = Rc::new(live_slots(&free(), vars));
        self.live.borrow_mut().insert(addr, l.clone());
        l
    }

    fn stack_live(&self, s: &Stack, vars: &[Name]) -> Rc<Vec<bool>> {
        self.live_of(s as *const Stack as usize, vars, || s.free_vars())
    }

    fn term_live(&self, m: &Term, vars: &[Name]) -> Rc<Vec<bool>> {
        self.live_of(m as *const Term as usize, vars, || m.free_vars())
    }

    fn stack(&self, s: &Stack, vars: &[Name], e: &DElem, t: &[DElem]) -> bool {
        let live = self.stack_live(s, vars);
        if t.iter().zip(live.iter()).any(|(x, &l)| !l && !x.is_star()) {
            return false;
        }
        let key = (s as *const Stack as usize, e.clone(), t.to_vec());
        if let Some(&known) = self.stacks.borrow().get(&key) {
            return known;
        }
        let r = match s {
            Stack::Nil => e.is_star() && is_unit(t),
            Stack::Var(a) => {
                // innermost binding is the last occurrence
                let i = vars.iter().rposition(|v| v == a).expect("variables checked on entry");
                &t[i] == e && t.iter().enumerate().all(|(j, x)| j == i || x.is_star())
            }
            Stack::Cdr(inner) => self.stack(inner, vars, &d_cons(Vec::new(), e), t),
            Stack::Cons(m, tail) => {
                let (heads, rest) = e.uncons();
                self.cons(m, tail, vars, &heads, &rest, t)
            }
        };
        self.stacks.borrow_mut().insert(key, r);
        r
    }

    // `heads :: rest` with `t` shared out among the heads and the tail
    fn cons(&self, m: &Term, tail: &Stack, vars: &[Name], heads: &[DElem], rest: &DElem, t: &[DElem]) -> bool {
        let Some((first, others)) = heads.split_first() else {
            return self.stack(tail, vars, rest, t);
        };
        let head_live = self.term_live(m, vars);
        let rest_live: Vec<bool> = if others.is_empty() {
            self.stack_live(tail, vars).to_vec()
        } else {
            let tl = self.stack_live(tail, vars);
            head_live.iter().zip(tl.iter()).map(|(a, b)| *a || *b).collect()
        };
        tuple_splits(t, &head_live, &rest_live)
            .iter()
            .any(|(t1, t2)| self.term(m, vars, first, t1) && self.cons(m, tail, vars, others, rest, t2))
    }

    fn term(&self, m: &Term, vars: &[Name], e: &DElem, t: &[DElem]) -> bool {
        match m {
            Term::Car(s) => self.stack(s, vars, &d_cons(vec![e.clone()], &DElem::star()), t),
            Term::Mu(b, p) => {
                let mut inner = vars.to_vec();
                inner.push(b.clone());
                let mut tuple = t.to_vec();
                tuple.push(e.clone());
                self.process(p, &inner, &tuple)
            }
        }
    }

    fn process(&self, p: &Process, vars: &[Name], t: &[DElem]) -> bool {
        let key = (p as *const Process as usize, t.to_vec());
        if let Some(&known) = self.procs.borrow().get(&key) {
            return known;
        }
        let parts = tuple_splits(t, &self.term_live(&p.term, vars), &self.stack_live(&p.stack, vars));
        let candidates =
            self.u.elements().iter().filter(|e| admits_term(&p.term, vars, t, e) && admits_stack(&p.stack, vars, t, e));
        let r = !parts.is_empty() && { candidates }.any(|sigma| {
            parts.iter().any(|(t1, t2)| self.term(&p.term, vars, sigma, t1) && self.stack(&p.stack, vars, sigma, t2))
        });
        self.procs.borrow_mut().insert(key, r);
        r
    }

    /// Candidate tuples: variables free in the subject range over the
    /// universe, the others are `∗`.
    fn tuples(&self, vars: &[Name], free: &BTreeSet<Name>) -> Vec<DTuple> {
        let mut acc: Vec<DTuple> = vec![Vec::new()];
        for live in live_slots(free, vars) {
            let choices: Vec<DElem> = if live { self.u.elements().to_vec() } else { vec![DElem::star()] };
            acc = acc
                .into_iter()
                .flat_map(|t| {
                    choices.iter().map(move |c| {
                        let mut t = t.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect();
        }
        acc
    }
}

fn check_vars(free: &BTreeSet<Name>, vars: &[Name]) -> Result<(), DenoteError> {
    match free.iter().find(|a| !vars.contains(a)) {
        Some(a) => Err(DenoteError::UnboundVariable(a.clone())),
        None => Ok(()),
    }
}

pub fn interp_stack(s: &Stack, vars: &[Name], u: &Universe) -> Result<InterpSet, DenoteError> {
    let free = s.free_vars();
    check_vars(&free, vars)?;
    let it = Interp::new(u);
    let mut pairs = BTreeSet::new();
    for t in it.tuples(vars, &free) {
        for e in u.elements() {
            if it.stack(s, vars, e, &t) {
                pairs.insert((e.clone(), t.clone()));
            }
        }
    }
    Ok(InterpSet { vars: vars.to_vec(), pairs })
}

pub fn interp_term(m: &Term, vars: &[Name], u: &Universe) -> Result<InterpSet, DenoteError> {
    let free = m.free_vars();
    check_vars(&free, vars)?;
    let it = Interp::new(u);
    let mut pairs = BTreeSet::new();
    for t in it.tuples(vars, &free) {
        for e in u.elements() {
            if it.term(m, vars, e, &t) {
                pairs.insert((e.clone(), t.clone()));
            }
        }
    }
    Ok(InterpSet { vars: vars.to_vec(), pairs })
}

pub fn interp_process(p: &Process, vars: &[Name], u: &Universe) -> Result<ProcInterp, DenoteError> {
    let free = p.free_vars();
    check_vars(&free, vars)?;
    let it = Interp::new(u);
    let tuples = it.tuples(vars, &free).into_iter().filter(|t| it.process(p, vars, t)).collect();
    Ok(ProcInterp { vars: vars.to_vec(), tuples })
}

/// Elements related to the empty tuple by a closed term.
pub fn closed_den(m: &Term, u: &Universe) -> Result<BTreeSet<DElem>, DenoteError> {
    Ok(interp_term(m, &[], u)?.pairs.into_iter().map(|(e, _)| e).collect())
}

/// Sorted array of printed elements.
pub fn den_to_json(set: &BTreeSet<DElem>) -> Value {
    Value::Array(set.iter().map(|e| Value::String(e.to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_stack, parse_term};
    use crate::machine::callcc_term;

    fn el(text: &str) -> DElem {
        text.parse().unwrap()
    }

    #[test]
    fn monoid_examples() {
        let one = d_cons(vec![d_star()], &d_star());
        assert_eq!(d_sum(&d_star(), &d_star()), d_star());
        assert_eq!(d_sum(&one, &d_star()), one);
        assert_eq!(d_cons(vec![], &d_star()), d_star());
        assert_eq!(d_sum(&one, &one).to_string(), "[∗,∗]::∗");
    }

    #[test]
    fn printing_and_parsing() {
        let e = d_cons(vec![], &d_cons(vec![d_star(), d_cons(vec![d_star()], &d_star())], &d_star()));
        assert_eq!(e.to_string(), "[]::[∗,[∗]::∗]::∗");
        assert_eq!(el(&e.to_string()), e);
        assert_eq!(el("[[*]::*, *]::*"), el("[∗,[∗]::∗]::∗"));
        assert_eq!(el("[]::[]::∗"), d_star());
        assert!("[∗]".parse::<DElem>().is_err());
        assert_eq!(e.to_json().to_string(), "[[],[[],[[[]]]]]");
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(enumerate(0, 3).len(), 0);
        assert_eq!(enumerate(1, 3).elements(), &[d_star()]);
        let u21 = enumerate(2, 1);
        assert!(u21.contains(&d_star()) && u21.contains(&el("[∗]::∗")));
        assert_eq!(enumerate(2, 2).len(), 6);
        // multisets of size <= 2 over 6 elements: 1 + 6 + 21;
        // length 1: 27, length 2: 6 + 21 + 36
        assert_eq!(enumerate(3, 2).len(), 1 + 27 + 63);
    }

    #[test]
    fn base_clauses() {
        let u = enumerate(2, 2);
        let nil = interp_stack(&parse_stack("nil").unwrap(), &[], &u).unwrap();
        assert_eq!(nil.pairs, BTreeSet::from([(d_star(), vec![])]));
        let a = Name::new("a");
        let v = interp_stack(&parse_stack("a").unwrap(), std::slice::from_ref(&a), &u).unwrap();
        assert_eq!(v.pairs.len(), u.len());
        assert!(v.pairs.iter().all(|(e, t)| t == &vec![e.clone()]));
        assert_eq!(
            interp_stack(&parse_stack("b").unwrap(), &[a], &u),
            Err(DenoteError::UnboundVariable(Name::new("b")))
        );
    }

    #[test]
    fn identity_denotes_diagonal_shapes() {
        // [ρ]::ρ for every ρ that fits
        let u = enumerate(3, 2);
        let den = closed_den(&parse_term("mu a. car(a) * cdr(a)").unwrap(), &u).unwrap();
        assert!(den.contains(&el("[∗]::∗")));
        assert!(den.contains(&el("[[∗]::∗]::[∗]::∗")));
        assert!(!den.contains(&d_star()));
        assert!(!den.contains(&el("[∗]::[∗]::∗")));
    }

    #[test]
    fn callcc_contains_base_instance() {
        let den = closed_den(&callcc_term(), &enumerate(3, 2)).unwrap();
        assert!(den.contains(&el("[∗]::∗")));
        let small = closed_den(&callcc_term(), &enumerate(1, 1)).unwrap();
        assert!(small.is_subset(&den));
    }
}
