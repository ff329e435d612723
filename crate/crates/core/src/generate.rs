//! Seeded random expressions and formulas for property tests and corpora.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::syntax::{app, car, cdr, cons, mu_n, nil, Expr, Name, Process, Stack, Term};
use crate::typesys::{Context, Formula, Judgement};

const BINDERS: [&str; 4] = ["a", "b", "c", "d"];
const ATOMS: [&str; 2] = ["p", "q"];

/// Untyped stack-calculus expressions over the variables `a, b, c, d`,
/// biased toward redexes.
pub struct ExprGen {
    rng: StdRng,
}

impl ExprGen {
    pub fn new(seed: u64) -> Self {
        ExprGen { rng: StdRng::seed_from_u64(seed) }
    }

    fn name(&mut self) -> Name {
        Name::new(BINDERS.choose(&mut self.rng).unwrap())
    }

    pub fn stack(&mut self, depth: usize) -> Stack {
        let choice = if depth == 0 { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..8) };
        match choice {
            0 => Stack::Var(self.name()),
            1 => nil(),
            2..=4 => cons(self.term(depth - 1), self.stack(depth - 1)),
            5 => cdr(cons(self.term(depth - 1), self.stack(depth - 1))),
            _ => cdr(self.stack(depth - 1)),
        }
    }

    pub fn term(&mut self, depth: usize) -> Term {
        if depth == 0 {
            return car(Stack::Var(self.name()));
        }
        match self.rng.gen_range(0..6) {
            0..=2 => mu_n(self.name(), self.process(depth - 1)),
            3 => car(cons(self.term(depth - 1), self.stack(depth - 1))),
            _ => car(self.stack(depth - 1)),
        }
    }

    pub fn process(&mut self, depth: usize) -> Process {
        app(self.term(depth), self.stack(depth))
    }

    pub fn expr(&mut self, depth: usize) -> Expr {
        match self.rng.gen_range(0..3) {
            0 => self.stack(depth).into(),
            1 => self.term(depth).into(),
            _ => self.process(depth).into(),
        }
    }
}

/// Random implicational formulas over `atoms` and `⊥`.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let i = rng.gen_range(0..=atoms.len());
        return atoms.get(i).map_or(Formula::Falsum, |a| Formula::atom(a));
    }
    Formula::arrow(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))
}

/// Type-directed generation: every expression is built together with a
/// derivation, so the returned judgement holds by construction. Variables
/// that cannot be supplied by a binder become free and are recorded in the
/// judgement's context.
pub struct TypedGen {
    rng: StdRng,
    scope: Vec<(Name, Formula)>,
    free: Vec<(Name, Formula)>,
}

impl TypedGen {
    pub fn new(seed: u64) -> Self {
        TypedGen { rng: StdRng::seed_from_u64(seed), scope: Vec::new(), free: Vec::new() }
    }

    pub fn formula(&mut self, depth: usize) -> Formula {
        random_formula(&mut self.rng, &ATOMS, depth)
    }

    fn visible(&self, a: &Formula) -> Vec<Name> {
        let mut out = Vec::new();
        for (i, (n, f)) in self.scope.iter().enumerate() {
            let shadowed = self.scope[i + 1..].iter().any(|(m, _)| m == n);
            if !shadowed && f == a {
                out.push(n.clone());
            }
        }
        out.extend(
            self.free.iter().filter(|(n, f)| f == a && !self.scope.iter().any(|(m, _)| m == n)).map(|(n, _)| n.clone()),
        );
        out
    }

    fn free_var(&mut self, a: &Formula) -> Stack {
        let name = Name::new(&format!("g{}", self.free.len()));
        self.free.push((name.clone(), a.clone()));
        Stack::Var(name)
    }

    fn stack(&mut self, a: &Formula, depth: usize) -> Stack {
        let vars = self.visible(a);
        if !vars.is_empty() && self.rng.gen_bool(if depth == 0 { 0.9 } else { 0.3 }) {
            return Stack::Var(vars.choose(&mut self.rng).unwrap().clone());
        }
        if depth == 0 {
            return match a {
                Formula::Falsum => nil(),
                Formula::Arrow(l, r) if self.rng.gen_bool(0.5) => {
                    let (l, r) = ((**l).clone(), (**r).clone());
                    cons(self.term(&l, 0), self.stack(&r, 0))
                }
                _ => self.free_var(a),
            };
        }
        match (a, self.rng.gen_range(0..4)) {
            (Formula::Falsum, 0) => nil(),
            (Formula::Arrow(l, r), 0 | 1) => {
                let (l, r) = ((**l).clone(), (**r).clone());
                cons(self.term(&l, depth - 1), self.stack(&r, depth - 1))
            }
            _ => {
                let head = self.formula(1);
                cdr(self.stack(&Formula::arrow(head, a.clone()), depth - 1))
            }
        }
    }

    fn term(&mut self, a: &Formula, depth: usize) -> Term {
        if depth > 0 && self.rng.gen_bool(0.6) {
            let binder = Name::new(BINDERS.choose(&mut self.rng).unwrap());
            self.scope.push((binder.clone(), a.clone()));
            let body = self.process(depth - 1);
            self.scope.pop();
            return mu_n(binder, body);
        }
        let rest = self.formula(1);
        let arrow = Formula::arrow(a.clone(), rest);
        let vars = self.visible(&arrow);
        if depth == 0 {
            let s = match vars.choose(&mut self.rng) {
                Some(v) => Stack::Var(v.clone()),
                None => self.free_var(&arrow),
            };
            return car(s);
        }
        car(self.stack(&arrow, depth - 1))
    }

    fn process(&mut self, depth: usize) -> Process {
        let a = if !self.scope.is_empty() && self.rng.gen_bool(0.5) {
            self.scope.choose(&mut self.rng).unwrap().1.clone()
        } else {
            self.formula(2)
        };
        app(self.term(&a, depth), self.stack(&a, depth))
    }

    /// A stack, term or process together with a judgement that holds.
    pub fn judgement(&mut self, depth: usize) -> Judgement {
        self.scope.clear();
        self.free.clear();
        let (subject, formula): (Expr, Option<Formula>) = match self.rng.gen_range(0..3) {
            0 => {
                let a = self.formula(2);
                (self.stack(&a, depth).into(), Some(a))
            }
            1 => {
                let a = self.formula(2);
                (self.term(&a, depth).into(), Some(a))
            }
            _ => (self.process(depth).into(), None),
        };
        Judgement { subject, formula, context: Context::from_entries(self.free.drain(..)) }
    }
}
