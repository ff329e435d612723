//! Deciding `¬B1, …, ¬Bn ⊨ A` for implicational formulas over atoms and
//! falsity. A valid sequent yields a stack-calculus term of type `A` in the
//! context `b1 : B1, …, bn : Bn`; an invalid one yields a valuation that
//! makes `A` and every `Bi` false.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::frontend::{print_context, print_formula, print_term};
use crate::syntax::{app, car, cdr_n, cons, mu_n, Name, Stack, Term};
use crate::typesys::{Context, Formula};

/// `terminal(G) = G`, `terminal(A -> B) = terminal(B)`.
pub fn terminal(a: &Formula) -> &Formula {
    match a {
        Formula::Arrow(_, r) => terminal(r),
        _ => a,
    }
}

/// The premisses along the right spine, left to right.
pub fn premiss_list(a: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    let mut cur = a;
    while let Formula::Arrow(l, r) = cur {
        out.push(l.as_ref());
        cur = r;
    }
    out
}

pub fn premisses(a: &Formula) -> BTreeSet<Formula> {
    premiss_list(a).into_iter().cloned().collect()
}

pub fn terminals(phi: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    phi.iter().map(|a| terminal(a).clone()).collect()
}

/// Premisses of members of `phi` whose terminal is a terminal of `phi` or
/// falsity.
pub fn prem_term(phi: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    prem_term_refs(phi).into_iter().cloned().collect()
}

fn prem_term_refs(phi: &BTreeSet<Formula>) -> BTreeSet<&Formula> {
    let mut targets: BTreeSet<&Formula> = phi.iter().map(terminal).collect();
    targets.insert(&Formula::Falsum);
    phi.iter().flat_map(|a| premiss_list(a).into_iter()).filter(|c| targets.contains(terminal(c))).collect()
}

pub fn is_saturated(phi: &BTreeSet<Formula>) -> bool {
    prem_term(phi).iter().all(|a| premiss_list(a).iter().any(|c| phi.contains(*c)))
}

/// Truth values of atoms. Falsity is always false and atoms without an
/// entry count as false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(pub BTreeMap<Name, bool>);

impl Valuation {
    pub fn get(&self, atom: &Name) -> bool {
        self.0.get(atom).copied().unwrap_or(false)
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.0.iter().map(|(k, v)| (k.to_string(), Value::Bool(*v))).collect();
        Value::Object(map)
    }
}

pub fn eval_formula(v: &Valuation, a: &Formula) -> bool {
    match a {
        Formula::Atom(x) => v.get(x),
        Formula::Falsum => false,
        Formula::Arrow(l, r) => !eval_formula(v, l) || eval_formula(v, r),
    }
}

/// All valuations of `atoms`, in binary counting order.
pub fn valuations(atoms: &BTreeSet<Name>) -> impl Iterator<Item = Valuation> + '_ {
    let n = atoms.len();
    assert!(n < 64, "too many atoms to enumerate");
    (0u64..(1u64 << n))
        .map(move |bits| Valuation(atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits >> i & 1 == 1)).collect()))
}

/// `¬hyps ⊨ goal` by truth tables: every valuation falsifying all of
/// `hyps` satisfies `goal`.
pub fn entails(hyps: &[Formula], goal: &Formula) -> bool {
    let mut atoms = goal.atoms();
    for h in hyps {
        atoms.extend(h.atoms());
    }
    let valid = valuations(&atoms).all(|v| hyps.iter().any(|h| eval_formula(&v, h)) || eval_formula(&v, goal));
    valid
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Goal, named hypotheses and the formula set `{goal} ∪ hyps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchState {
    pub goal: Formula,
    pub hyps: Vec<(Name, Formula)>,
    pub phi: BTreeSet<Formula>,
}

static GOAL_VAR: LazyLock<Name> = LazyLock::new(|| Name::new("b0"));

/// The variable bound to the goal.
pub fn goal_var() -> Name {
    GOAL_VAR.clone()
}

fn hyp_var(i: usize) -> Name {
    Name::new(&format!("b{i}"))
}

impl SearchState {
    pub fn new(goal: Formula, hyps: &[Formula]) -> Self {
        let named = hyps.iter().enumerate().map(|(i, h)| (hyp_var(i + 1), h.clone())).collect();
        Self::with_named(goal, named)
    }

    fn with_named(goal: Formula, hyps: Vec<(Name, Formula)>) -> Self {
        let mut phi: BTreeSet<Formula> = hyps.iter().map(|(_, f)| f.clone()).collect();
        phi.insert(goal.clone());
        SearchState { goal, hyps, phi }
    }

    /// The state with one more hypothesis, named by the next index.
    pub fn extend(&self, c: Formula) -> SearchState {
        let mut hyps = self.hyps.clone();
        hyps.push((hyp_var(self.hyps.len() + 1), c));
        Self::with_named(self.goal.clone(), hyps)
    }

    pub fn context(&self) -> Context {
        Context::from_entries(self.hyps.iter().cloned())
    }

    // (formula, its variable) for every member of phi, goal first
    fn members(&self) -> impl Iterator<Item = (&Formula, &Name)> {
        let goal = std::iter::once((&self.goal, None));
        let hyps = self.hyps.iter().enumerate().map(|(i, (n, f))| (f, Some((i, n))));
        goal.chain(hyps).filter_map(move |(f, slot)| match slot {
            None => Some((f, &*GOAL_VAR)),
            Some((i, n)) => {
                let earlier = *f == self.goal || self.hyps[..i].iter().any(|(_, g)| g == f);
                (!earlier).then_some((f, n))
            }
        })
    }

    /// First member with `a` among its premisses: variable and 1-based index.
    fn having_premiss(&self, a: &Formula) -> Option<(Name, usize)> {
        self.members().find_map(|(f, n)| premiss_list(f).iter().position(|c| *c == a).map(|i| (n.clone(), i + 1)))
    }

    /// First member whose terminal is `g`, with its rank.
    fn with_terminal(&self, g: &Formula) -> Option<(Name, usize)> {
        self.members().find(|(f, _)| terminal(f) == g).map(|(f, n)| (n.clone(), f.rank()))
    }
}

fn svar(n: &Name) -> Stack {
    Stack::Var(n.clone())
}

/// `car(cdr^(i-1)(x))`.
fn select(x: &Name, i: usize) -> Term {
    car(cdr_n(svar(x), i - 1))
}

/// The proof term for a sequent whose `premTerm` contains the atomic
/// formula `atom`.
pub fn lemma1_term(state: &SearchState, atom: &Formula) -> Result<Term, ProverError> {
    if !atom.is_atomic() || !prem_term(&state.phi).contains(atom) {
        return Err(ProverError::Precondition(format!(
            "`{}` is not an atomic member of premTerm",
            print_formula(atom)
        )));
    }
    Ok(lemma1_unchecked(state, atom))
}

fn lemma1_unchecked(state: &SearchState, atom: &Formula) -> Term {
    let (bj, i) = state.having_premiss(atom).expect("members of premTerm are premisses");
    let eps = Name::new("e");
    let b0 = goal_var();
    // case 1: some member ends in the atom
    if let Some((bk, rank)) = state.with_terminal(atom) {
        let inner = mu_n(eps.clone(), app(select(&bj, i), cdr_n(svar(&eps), rank)));
        return mu_n(b0, app(inner, svar(&bk)));
    }
    // case 2: the atom is falsity
    let inner = mu_n(eps, app(select(&bj, i), Stack::Nil));
    mu_n(b0.clone(), app(inner, svar(&b0)))
}

/// Combines proofs `subproofs[i]` of the goal under the extra hypothesis
/// `C_i`, for `a = C_1 -> … -> C_m -> G` in `premTerm`, into a proof of the
/// goal. Each subproof must use the variable the extension of `state` by
/// `C_i` assigns.
pub fn lemma2_combine(state: &SearchState, a: &Formula, subproofs: &[Term]) -> Result<Term, ProverError> {
    let cs = premiss_list(a);
    if cs.is_empty() || !prem_term(&state.phi).contains(a) {
        return Err(ProverError::Precondition(format!(
            "`{}` is not a non-atomic member of premTerm",
            print_formula(a)
        )));
    }
    if cs.len() != subproofs.len() {
        return Err(ProverError::Precondition(format!("expected {} subproofs, got {}", cs.len(), subproofs.len())));
    }
    Ok(lemma2_unchecked(state, a, subproofs))
}

fn lemma2_unchecked(state: &SearchState, a: &Formula, subproofs: &[Term]) -> Term {
    let b0 = goal_var();
    let eps = Name::new("e");
    let delta = Name::new("d");
    let gamma = hyp_var(state.hyps.len() + 1);
    let g = terminal(a);
    let (pi, bk) = match state.with_terminal(g) {
        Some((bk, rank)) => (cdr_n(svar(&eps), rank), bk),
        None if *g == Formula::Falsum => (Stack::Nil, b0.clone()),
        None => unreachable!("premTerm members end in a terminal of phi or falsity"),
    };
    let varpi = subproofs.iter().rev().fold(pi, |tail, m| cons(mu_n(gamma.clone(), app(m.clone(), svar(&b0))), tail));
    let (bh, j) = state.having_premiss(a).expect("members of premTerm are premisses");
    let by_eps = mu_n(eps, app(select(&delta, j), varpi));
    let by_delta = mu_n(delta, app(by_eps, svar(&bk)));
    mu_n(b0, app(by_delta, svar(&bh)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofResult {
    Proof {
        term: Term,
        goal: Formula,
        hyps: Context,
    },
    /// `phi` is the saturated set the valuation was read from.
    Countermodel {
        valuation: Valuation,
        phi: BTreeSet<Formula>,
    },
}

impl ProofResult {
    pub fn is_proof(&self) -> bool {
        matches!(self, ProofResult::Proof { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            ProofResult::Proof { term, goal, hyps } => json!({
                "result": "proof",
                "term": print_term(term),
                "goal": print_formula(goal),
                "context": print_context(hyps),
            }),
            ProofResult::Countermodel { valuation, .. } => json!({
                "result": "countermodel",
                "valuation": valuation.to_json(),
            }),
        }
    }
}

/// Statistics of one `decide` run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub max_depth: usize,
    pub states: usize,
}

pub fn decide(goal: &Formula, hyps: &[Formula]) -> ProofResult {
    decide_with_stats(goal, hyps).0
}

pub fn decide_with_stats(goal: &Formula, hyps: &[Formula]) -> (ProofResult, SearchStats) {
    let state = SearchState::new(goal.clone(), hyps);
    let mut atoms = goal.atoms();
    for h in hyps {
        atoms.extend(h.atoms());
    }
    let mut stats = SearchStats::default();
    let r = match search(&state, 0, &mut stats) {
        Ok(term) => ProofResult::Proof { term, goal: goal.clone(), hyps: state.context() },
        Err(phi) => {
            let ts = terminals(&phi);
            let valuation = atoms
                .into_iter()
                .map(|a| {
                    let falsified = ts.contains(&Formula::Atom(a.clone()));
                    (a, !falsified)
                })
                .collect();
            ProofResult::Countermodel { valuation: Valuation(valuation), phi }
        }
    };
    (r, stats)
}

// Ok(proof term) or Err(saturated superset of phi)
fn search(state: &SearchState, depth: usize, stats: &mut SearchStats) -> Result<Term, BTreeSet<Formula>> {
    stats.states += 1;
    stats.max_depth = stats.max_depth.max(depth);
    let pt = prem_term_refs(&state.phi);
    if let Some(atom) = pt.iter().find(|a| a.is_atomic()) {
        return Ok(lemma1_unchecked(state, atom));
    }
    let Some(a) = pt.into_iter().find(|a| !premiss_list(a).iter().any(|c| state.phi.contains(*c))) else {
        return Err(state.phi.clone());
    };
    let mut subproofs = Vec::new();
    for c in premiss_list(a) {
        subproofs.push(search(&state.extend(c.clone()), depth + 1, stats)?);
    }
    Ok(lemma2_unchecked(state, a, &subproofs))
}

/// Every formula built from `atoms` and falsity with at most
/// `max_connectives` arrows, grouped by arrow count.
pub fn enumerate_formulas(atoms: &[&str], max_connectives: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = Vec::new();
    let mut leaves: Vec<Formula> = atoms.iter().map(|a| Formula::atom(a)).collect();
    leaves.push(Formula::Falsum);
    by_size.push(leaves);
    for n in 1..=max_connectives {
        let mut level = Vec::new();
        for left in 0..n {
            let right = n - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    level.push(Formula::arrow(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(level);
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_formula;
    use crate::syntax::mu;
    use crate::typesys::check_term;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn terminal_and_premisses() {
        assert_eq!(terminal(&f("a -> b -> c")), &f("c"));
        assert_eq!(premisses(&f("a -> b -> c")), set(&["a", "b"]));
        assert!(premisses(&f("a")).is_empty());
    }

    #[test]
    fn prem_term_examples() {
        assert_eq!(prem_term(&set(&["(a -> b) -> a", "b"])), set(&["a -> b"]));
        assert!(prem_term(&set(&["a"])).is_empty());
        assert_eq!(prem_term(&set(&["false -> a"])), set(&["false"]));
    }

    #[test]
    fn saturation_examples() {
        assert!(is_saturated(&BTreeSet::new()));
        assert!(is_saturated(&set(&["a -> b"])));
        assert!(!is_saturated(&set(&["false -> a"])));
    }

    #[test]
    fn truth_tables() {
        let v = Valuation(BTreeMap::from([(Name::new("a"), false)]));
        assert!(eval_formula(&v, &f("a -> false")));
        assert!(entails(&[], &f("((a -> b) -> a) -> a")));
        assert!(!entails(&[], &f("a -> b")));
    }

    #[test]
    fn lemma1_case2_template() {
        let state = SearchState::new(f("false -> a"), &[]);
        let m = lemma1_term(&state, &Formula::Falsum).unwrap();
        let expected = mu("b0", app(mu("e", app(car(svar(&Name::new("b0"))), Stack::Nil)), svar(&Name::new("b0"))));
        assert_eq!(m, expected);
        assert!(check_term(&m, &f("false -> a"), &Context::new()));
    }

    #[test]
    fn lemma1_case1_template() {
        let state = SearchState::new(f("a -> a"), &[]);
        let m = lemma1_term(&state, &f("a")).unwrap();
        assert_eq!(print_term(&m), "mu b0. (mu e. car(b0) * cdr(e)) * b0");
        assert!(check_term(&m, &f("a -> a"), &Context::new()));
    }

    #[test]
    fn lemma1_precondition() {
        let state = SearchState::new(f("a"), &[f("a")]);
        assert!(lemma1_term(&state, &f("a")).is_err());
    }

    fn assert_proof(goal: &str, hyps: &[&str]) -> Term {
        let hyps: Vec<Formula> = hyps.iter().map(|h| f(h)).collect();
        match decide(&f(goal), &hyps) {
            ProofResult::Proof { term, goal, hyps } => {
                assert!(check_term(&term, &goal, &hyps), "{}", print_term(&term));
                term
            }
            other => panic!("expected a proof, got {other:?}"),
        }
    }

    #[test]
    fn proves_peirce() {
        assert_proof("((a -> b) -> a) -> a", &[]);
    }

    #[test]
    fn proves_double_negation_elimination() {
        let m = assert_proof("((a -> false) -> false) -> a", &[]);
        assert!(print_term(&m).contains(":: nil"));
    }

    #[test]
    fn proves_with_hypotheses() {
        // ¬(a -> false) ⊨ a
        assert_proof("a", &["a -> false"]);
    }

    #[test]
    fn lemma2_with_single_premiss() {
        // premTerm holds (a -> false) -> false, whose only premiss is added
        let goal = f("((a -> false) -> false) -> a");
        let state = SearchState::new(goal.clone(), &[]);
        let ext = state.extend(f("a -> false"));
        let sub = lemma1_term(&ext, &f("a")).unwrap();
        assert!(check_term(&sub, &goal, &ext.context()));
        let m = lemma2_combine(&state, &f("(a -> false) -> false"), &[sub]).unwrap();
        assert_eq!(
            print_term(&m),
            "mu b0. (mu d. (mu e. car(d) * (mu b1. (mu b0. (mu e. car(b1) * cdr(e)) * b0) * b0) :: nil) * b0) * b0"
        );
        assert!(check_term(&m, &goal, &Context::new()));
    }

    #[test]
    fn countermodels() {
        match decide(&f("a -> b"), &[]) {
            ProofResult::Countermodel { valuation, phi } => {
                assert!(valuation.get(&Name::new("a")));
                assert!(!valuation.get(&Name::new("b")));
                assert!(is_saturated(&phi));
            }
            other => panic!("{other:?}"),
        }
        match decide(&f("a"), &[]) {
            ProofResult::Countermodel { valuation, .. } => {
                assert_eq!(valuation.to_json(), json!({"a": false}));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let r = decide(&f("a -> a"), &[]);
        let v = r.to_json();
        assert_eq!(v["result"], "proof");
        assert_eq!(v["goal"], "a -> a");
        assert_eq!(v["context"], "");
    }

    #[test]
    fn agrees_with_truth_tables_on_small_formulas() {
        for a in enumerate_formulas(&["a", "b"], 3) {
            let r = decide(&a, &[]);
            assert_eq!(r.is_proof(), entails(&[], &a), "{}", print_formula(&a));
        }
    }

    #[test]
    fn formula_counts() {
        // 3 leaves; Catalan(n) shapes with n + 1 leaves
        let counts: Vec<usize> = (0..4).map(|n| enumerate_formulas(&["a", "b"], n).len()).collect();
        assert_eq!(counts, vec![3, 3 + 9, 3 + 9 + 54, 3 + 9 + 54 + 405]);
    }
}
