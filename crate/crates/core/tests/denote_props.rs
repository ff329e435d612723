use std::collections::BTreeSet;
use std::sync::LazyLock;

use proptest::prelude::*;
use stackcalc::denote::{
    closed_den, d_cons, d_star, d_sum, enumerate, interp_process, interp_stack, interp_term, DElem, Universe,
};
use stackcalc::frontend::{parse_process, parse_stack, parse_term, print_term};
use stackcalc::generate::ExprGen;
use stackcalc::lambdamu::{callcc, translate};
use stackcalc::machine::callcc_term;
use stackcalc::syntax::{car, cdr, cons, Expr, Name, Stack, Term};

static U32: LazyLock<Universe> = LazyLock::new(|| enumerate(3, 2));

fn elem() -> impl Strategy<Value = DElem> {
    prop::sample::select(U32.elements().to_vec())
}

fn a() -> Vec<Name> {
    vec![Name::new("a")]
}

// rename every free variable to `a`
fn close_over_a(m: Term) -> Term {
    let fv = m.free_vars();
    fv.iter().fold(m, |m, x| m.subst(x, &Stack::Var(Name::new("a"))))
}

fn small_term(seed: u64) -> Term {
    close_over_a(ExprGen::new(seed).term(2))
}

fn small_stack(seed: u64) -> Stack {
    let s = ExprGen::new(seed).stack(2);
    let fv = s.free_vars();
    fv.iter().fold(s, |s, x| s.subst(x, &Stack::Var(Name::new("a"))))
}

// Bottom-up evaluation of the clauses with every intermediate element
// confined to the universe: it can only miss pairs, never invent them.
mod bottom_up {
    use super::*;

    type Pairs = BTreeSet<(DElem, Vec<DElem>)>;

    fn units(n: usize) -> Vec<DElem> {
        vec![d_star(); n]
    }

    fn sum(x: &[DElem], y: &[DElem]) -> Vec<DElem> {
        x.iter().zip(y).map(|(p, q)| d_sum(p, q)).collect()
    }

    fn fits(u: &Universe, t: &[DElem]) -> bool {
        t.iter().all(|e| u.contains(e))
    }

    pub fn stack(s: &Stack, vars: &[Name], u: &Universe) -> Pairs {
        match s {
            Stack::Nil => [(d_star(), units(vars.len()))].into(),
            Stack::Var(x) => {
                let i = vars.iter().rposition(|v| v == x).unwrap();
                u.elements()
                    .iter()
                    .map(|e| {
                        let mut t = units(vars.len());
                        t[i] = e.clone();
                        (e.clone(), t)
                    })
                    .collect()
            }
            Stack::Cdr(inner) => {
                let below = stack(inner, vars, u);
                u.elements()
                    .iter()
                    .flat_map(|e| {
                        let shifted = d_cons(Vec::new(), e);
                        below.iter().filter(move |(f, _)| *f == shifted).map(move |(_, t)| (e.clone(), t.clone()))
                    })
                    .collect()
            }
            Stack::Cons(m, tail) => {
                let heads: Vec<_> = term(m, vars, u).into_iter().collect();
                let mut out = Pairs::new();
                for (rest, t0) in stack(tail, vars, u) {
                    // grow the head multiset one element at a time
                    let mut frontier: Vec<(Vec<DElem>, Vec<DElem>)> = vec![(Vec::new(), t0)];
                    while let Some((ms, t)) = frontier.pop() {
                        let e = d_cons(ms.clone(), &rest);
                        if !u.contains(&e) {
                            continue;
                        }
                        out.insert((e, t.clone()));
                        for (h, th) in &heads {
                            // nondecreasing order avoids revisiting permutations
                            if ms.last().is_some_and(|l| l > h) {
                                continue;
                            }
                            let t2 = sum(&t, th);
                            if fits(u, &t2) {
                                let mut ms2 = ms.clone();
                                ms2.push(h.clone());
                                frontier.push((ms2, t2));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    pub fn term(m: &Term, vars: &[Name], u: &Universe) -> Pairs {
        match m {
            Term::Car(s) => {
                let below = stack(s, vars, u);
                u.elements()
                    .iter()
                    .flat_map(|e| {
                        let wrapped = d_cons(vec![e.clone()], &d_star());
                        below.iter().filter(move |(f, _)| *f == wrapped).map(move |(_, t)| (e.clone(), t.clone()))
                    })
                    .collect()
            }
            Term::Mu(b, p) => {
                let mut inner = vars.to_vec();
                inner.push(b.clone());
                process(p, &inner, u)
                    .into_iter()
                    .map(|mut t| {
                        let e = t.pop().unwrap();
                        (e, t)
                    })
                    .collect()
            }
        }
    }

    pub fn process(p: &stackcalc::syntax::Process, vars: &[Name], u: &Universe) -> BTreeSet<Vec<DElem>> {
        let ms = term(&p.term, vars, u);
        let ss = stack(&p.stack, vars, u);
        let mut out = BTreeSet::new();
        for (e, t) in &ms {
            for (f, t2) in &ss {
                let total = sum(t, t2);
                if e == f && fits(u, &total) {
                    out.insert(total);
                }
            }
        }
        out
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sum_is_a_commutative_monoid(x in elem(), y in elem(), z in elem()) {
        prop_assert_eq!(d_sum(&x, &d_star()), x.clone());
        prop_assert_eq!(d_sum(&x, &y), d_sum(&y, &x));
        prop_assert_eq!(d_sum(&d_sum(&x, &y), &z), d_sum(&x, &d_sum(&y, &z)));
    }

    #[test]
    fn elements_are_canonical(x in elem(), y in elem()) {
        prop_assert!(x.entries().last().is_none_or(|m| !m.is_empty()));
        prop_assert_eq!(d_cons(Vec::new(), &d_star()), d_star());
        // multisets ignore order
        prop_assert_eq!(d_cons(vec![x.clone(), y.clone()], &d_star()), d_cons(vec![y.clone(), x.clone()], &d_star()));
        let shown = x.to_string();
        prop_assert_eq!(shown.parse::<DElem>().unwrap(), x);
    }
}

#[test]
fn universe_is_closed_under_sub_elements() {
    for e in U32.elements() {
        for m in e.entries() {
            assert!(m.iter().all(|x| U32.contains(x)));
        }
        assert!(U32.contains(&e.uncons().1));
    }
    assert!(U32.contains(&d_star()));
    assert_eq!(enumerate(1, 3).elements(), &[d_star()]);
    let small = enumerate(2, 1);
    assert!(small.contains(&d_cons(vec![d_star()], &d_star())));
}

#[test]
fn nil_and_variables() {
    let nil = interp_stack(&parse_stack("nil").unwrap(), &[], &U32).unwrap();
    assert_eq!(nil.pairs, [(d_star(), vec![])].into());
    let var = interp_stack(&parse_stack("a").unwrap(), &a(), &U32).unwrap();
    let expected: BTreeSet<_> = U32.elements().iter().map(|e| (e.clone(), vec![e.clone()])).collect();
    assert_eq!(var.pairs, expected);
    // the other slots stay at the unit
    let vars = vec![Name::new("b"), Name::new("a"), Name::new("c")];
    let mid = interp_stack(&parse_stack("a").unwrap(), &vars, &U32).unwrap();
    let expected: BTreeSet<_> =
        U32.elements().iter().map(|e| (e.clone(), vec![d_star(), e.clone(), d_star()])).collect();
    assert_eq!(mid.pairs, expected);
}

#[test]
fn projections_cancel_constructors() {
    for seed in 0..12u64 {
        let m = small_term(seed);
        let s = small_stack(seed + 1000);
        let pair = cons(m.clone(), s.clone());
        let left = interp_term(&car(pair.clone()), &a(), &U32).unwrap();
        assert_eq!(left.pairs, interp_term(&m, &a(), &U32).unwrap().pairs, "car of {}", print_term(&m));
        let right = interp_stack(&cdr(pair), &a(), &U32).unwrap();
        assert_eq!(right.pairs, interp_stack(&s, &a(), &U32).unwrap().pairs);
    }
}

#[test]
fn stacks_relate_the_unit_only_to_the_unit_tuple() {
    for seed in 0..12u64 {
        let s = small_stack(seed);
        let r = interp_stack(&s, &a(), &U32).unwrap();
        let at_unit: Vec<_> = r.pairs.iter().filter(|(e, _)| e.is_star()).collect();
        assert_eq!(at_unit, vec![&(d_star(), vec![d_star()])]);
    }
}

#[test]
fn identity_denotes_the_diagonal() {
    let id = parse_term("mu a. car(a) * cdr(a)").unwrap();
    let expected: BTreeSet<DElem> =
        U32.elements().iter().map(|r| d_cons(vec![r.clone()], r)).filter(|e| U32.contains(e)).collect();
    assert_eq!(closed_den(&id, &U32).unwrap(), expected);
}

#[test]
fn callcc_contains_its_base_instance() {
    let base = d_cons(vec![d_star()], &d_star());
    let Expr::Term(te) = translate(&callcc().into()) else { panic!("call/cc translates to a term") };
    assert!(closed_den(&te, &U32).unwrap().contains(&base));
    assert!(closed_den(&callcc_term(), &U32).unwrap().contains(&base));
}

#[test]
fn membership_covers_bottom_up_evaluation() {
    let u = enumerate(2, 2);
    for seed in 0..20u64 {
        let m = small_term(seed);
        let direct = interp_term(&m, &a(), &u).unwrap().pairs;
        let oracle = bottom_up::term(&m, &a(), &u);
        assert!(oracle.is_subset(&direct), "{}", print_term(&m));
    }
    let id = parse_term("mu a. car(a) * cdr(a)").unwrap();
    assert_eq!(interp_term(&id, &[], &U32).unwrap().pairs, bottom_up::term(&id, &[], &U32));
}

#[test]
fn beta_redexes_and_reducts_agree() {
    for (redex, reduct) in [
        ("mu k. (mu a. car(a) * cdr(a)) * car(k) :: cdr(k)", "mu k. car(k) * cdr(k)"),
        ("car((mu a. car(a) * cdr(a)) :: nil)", "mu a. car(a) * cdr(a)"),
        ("mu k. (mu a. car(a) * k) * nil", "mu k. car(nil) * k"),
        ("mu k. (mu a. car(k) * a) * cdr(k)", "mu k. car(k) * cdr(k)"),
    ] {
        let l = closed_den(&parse_term(redex).unwrap(), &U32).unwrap();
        let r = closed_den(&parse_term(reduct).unwrap(), &U32).unwrap();
        assert_eq!(l, r, "{redex}");
    }
    let p = parse_process("(mu a. car(a) * cdr(a)) * (mu a. car(a) * cdr(a)) :: nil").unwrap();
    let q = parse_process("car(nil) * cdr(nil)").unwrap();
    assert_eq!(interp_process(&p, &[], &U32).unwrap().tuples, interp_process(&q, &[], &U32).unwrap().tuples);
}

#[test]
fn growing_the_bounds_keeps_every_pair() {
    let (d22, d31) = (enumerate(2, 2), enumerate(3, 1));
    let mut g = ExprGen::new(7);
    let mut sampled = 0;
    while sampled < 20 {
        let m = g.term(2);
        if !m.free_vars().is_empty() {
            continue;
        }
        sampled += 1;
        let big = closed_den(&m, &U32).unwrap();
        assert!(closed_den(&m, &d22).unwrap().is_subset(&big), "{}", print_term(&m));
        assert!(closed_den(&m, &d31).unwrap().is_subset(&big), "{}", print_term(&m));
    }
    for small in [enumerate(1, 1), enumerate(2, 1), d22] {
        assert!(closed_den(&callcc_term(), &small).unwrap().is_subset(&closed_den(&callcc_term(), &U32).unwrap()));
    }
}

#[test]
fn unbound_variables_are_reported() {
    assert!(interp_term(&parse_term("car(a)").unwrap(), &[], &U32).is_err());
}
