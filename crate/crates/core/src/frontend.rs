//! Concrete syntax: one lexer shared by the parsers for stack expressions,
//! λμ-expressions, formulas and contexts, plus the matching printers.
//!
//! ```text
//! process := term "*" stack
//! term    := "mu" IDENT "." process | "car" "(" stack ")" | "(" term ")"
//! stack   := term "::" stack | IDENT | "nil" | "cdr" "(" stack ")" | "(" stack ")"
//! lterm   := "\" IDENT "." lterm | "mu" IDENT "." lproc | lapp
//! lapp    := latom { latom }
//! latom   := IDENT | "(" lterm ")"
//! lproc   := "[" IDENT "]" lterm
//! formula := fatom [ "->" formula ] ; fatom := IDENT | "false" | "(" formula ")"
//! context := [ IDENT ":" formula { "," IDENT ":" formula } ]
//! ```

use std::fmt;

use thiserror::Error;

use crate::lambdamu::{LExpr, LProc, LTerm};
use crate::syntax::{self, Expr, Name, Process, Stack, Term};
use crate::typesys::{Context, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at bytes {}..{}", span.start, span.end)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Mu,
    Car,
    Cdr,
    Nil,
    False,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Dot,
    Star,
    ColonColon,
    Colon,
    Comma,
    Arrow,
    Backslash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Mu => "`mu`".into(),
            Tok::Car => "`car`".into(),
            Tok::Cdr => "`cdr`".into(),
            Tok::Nil => "`nil`".into(),
            Tok::False => "`false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Star => "`*`".into(),
            Tok::ColonColon => "`::`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn error(start: usize, end: usize, message: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        span: SourceSpan { start, end },
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            match &text[start..i] {
                "mu" => Tok::Mu,
                "car" => Tok::Car,
                "cdr" => Tok::Cdr,
                "nil" => Tok::Nil,
                "false" => Tok::False,
                word => Tok::Ident(word.to_string()),
            }
        } else {
            let two = bytes.get(i + 1).copied();
            let (tok, len) = match (c, two) {
                (b':', Some(b':')) => (Tok::ColonColon, 2),
                (b'-', Some(b'>')) => (Tok::Arrow, 2),
                (b':', _) => (Tok::Colon, 1),
                (b'(', _) => (Tok::LParen, 1),
                (b')', _) => (Tok::RParen, 1),
                (b'[', _) => (Tok::LBracket, 1),
                (b']', _) => (Tok::RBracket, 1),
                (b'.', _) => (Tok::Dot, 1),
                (b'*', _) => (Tok::Star, 1),
                (b',', _) => (Tok::Comma, 1),
                (b'\\', _) => (Tok::Backslash, 1),
                _ => {
                    let width = text[start..].chars().next().map_or(1, char::len_utf8);
                    return Err(error(
                        start,
                        start + width,
                        format!("unexpected character `{}`", &text[start..start + width]),
                        &[],
                    ));
                }
            };
            i += len;
            tok
        };
        out.push((tok, SourceSpan { start, end: i }));
    }
    out.push((Tok::Eof, SourceSpan { start: text.len(), end: text.len() }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let span = self.span();
        error(span.start, span.end, format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Name::new(&s))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    // ---- stack calculus ----

    fn process_level(&mut self) -> Result<Expr, ParseError> {
        let start = self.span().start;
        let left = self.cons_level()?;
        if *self.peek() != Tok::Star {
            return Ok(left);
        }
        let star = self.span();
        let term = match left {
            Expr::Term(t) => t,
            other => {
                return Err(error(
                    start,
                    star.start,
                    format!("the left side of `*` must be a term, found a {}", other.sort()),
                    &["term"],
                ))
            }
        };
        self.bump();
        let rhs_start = self.span().start;
        match self.cons_level()? {
            Expr::Stack(stack) => Ok(Expr::Process(Process { term, stack })),
            other => Err(error(
                rhs_start,
                self.span().start,
                format!("the right side of `*` must be a stack, found a {}", other.sort()),
                &["stack"],
            )),
        }
    }

    fn cons_level(&mut self) -> Result<Expr, ParseError> {
        let left = self.primary()?;
        match (left, self.peek()) {
            (Expr::Term(head), Tok::ColonColon) => {
                self.bump();
                let tail_start = self.span().start;
                match self.cons_level()? {
                    Expr::Stack(tail) => Ok(Expr::Stack(syntax::cons(head, tail))),
                    other => Err(error(
                        tail_start,
                        self.span().start,
                        format!("the tail of `::` must be a stack, found a {}", other.sort()),
                        &["stack"],
                    )),
                }
            }
            (left, _) => Ok(left),
        }
    }

    fn stack_arg(&mut self, op: &str) -> Result<Stack, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let start = self.span().start;
        let inner = self.process_level()?;
        let end = self.span().start;
        self.expect(Tok::RParen, "`)`")?;
        match inner {
            Expr::Stack(s) => Ok(s),
            other => Err(error(start, end, format!("`{op}` expects a stack, found a {}", other.sort()), &["stack"])),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Mu => {
                self.bump();
                let binder = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                let start = self.span().start;
                match self.process_level()? {
                    Expr::Process(p) => Ok(Expr::Term(Term::Mu(binder, Box::new(p)))),
                    other => Err(error(
                        start,
                        self.span().start,
                        format!("the body of `mu` must be a process, found a {}", other.sort()),
                        &["process"],
                    )),
                }
            }
            Tok::Car => {
                self.bump();
                Ok(Expr::Term(syntax::car(self.stack_arg("car")?)))
            }
            Tok::Cdr => {
                self.bump();
                Ok(Expr::Stack(syntax::cdr(self.stack_arg("cdr")?)))
            }
            Tok::Nil => {
                self.bump();
                Ok(Expr::Stack(Stack::Nil))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Stack(Stack::Var(Name::new(&s))))
            }
            Tok::LParen => {
                let open = self.bump().1;
                let inner = self.process_level()?;
                if let Expr::Process(_) = inner {
                    return Err(error(
                        open.start,
                        self.span().end,
                        "processes cannot be parenthesized",
                        &["term", "stack"],
                    ));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["`mu`", "`car`", "`cdr`", "`nil`", "identifier", "`(`"])),
        }
    }

    // ---- lambda-mu ----

    fn lterm(&mut self) -> Result<LTerm, ParseError> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(LTerm::Lam(x, Box::new(self.lterm()?)))
            }
            Tok::Mu => {
                self.bump();
                let a = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(LTerm::Mu(a, Box::new(self.lproc()?)))
            }
            _ => self.lapp(),
        }
    }

    fn lapp(&mut self) -> Result<LTerm, ParseError> {
        let mut acc = self.latom()?;
        while matches!(self.peek(), Tok::Ident(_) | Tok::LParen) {
            let arg = self.latom()?;
            acc = LTerm::App(Box::new(acc), Box::new(arg));
        }
        Ok(acc)
    }

    fn latom(&mut self) -> Result<LTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(LTerm::Var(Name::new(&s)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.lterm()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.unexpected(&["identifier", "`(`", "`\\`", "`mu`"])),
        }
    }

    fn lproc(&mut self) -> Result<LProc, ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let name = self.ident()?;
        self.expect(Tok::RBracket, "`]`")?;
        Ok(LProc { name, body: self.lterm()? })
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.fatom()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn fatom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Formula::Atom(Name::new(&s)))
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.unexpected(&["identifier", "`false`", "`(`"])),
        }
    }

    fn context(&mut self) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        if *self.peek() == Tok::Eof {
            return Ok(ctx);
        }
        loop {
            let span = self.span();
            let name = self.ident()?;
            self.expect(Tok::Colon, "`:`")?;
            let formula = self.formula()?;
            if ctx.get(&name).is_some() {
                return Err(error(span.start, span.end, format!("duplicate context entry `{name}`"), &[]));
            }
            ctx.push(name, formula);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(ctx);
            }
        }
    }
}

/// Parses a stack, term or process; the sort follows from the shape.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.process_level()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    match parse_expr(text)? {
        Expr::Term(t) => Ok(t),
        other => Err(error(0, text.len(), format!("expected a term, found a {}", other.sort()), &["term"])),
    }
}

pub fn parse_stack(text: &str) -> Result<Stack, ParseError> {
    match parse_expr(text)? {
        Expr::Stack(s) => Ok(s),
        other => Err(error(0, text.len(), format!("expected a stack, found a {}", other.sort()), &["stack"])),
    }
}

pub fn parse_process(text: &str) -> Result<Process, ParseError> {
    match parse_expr(text)? {
        Expr::Process(p) => Ok(p),
        other => Err(error(0, text.len(), format!("expected a process, found a {}", other.sort()), &["process"])),
    }
}

/// Parses a λμ-term, or a named term when the input starts with `[`.
pub fn parse_lmu(text: &str) -> Result<LExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = if *p.peek() == Tok::LBracket { LExpr::Proc(p.lproc()?) } else { LExpr::Term(p.lterm()?) };
    p.finish()?;
    Ok(e)
}

pub fn parse_lterm(text: &str) -> Result<LTerm, ParseError> {
    match parse_lmu(text)? {
        LExpr::Term(t) => Ok(t),
        LExpr::Proc(_) => Err(error(0, text.len(), "expected a λμ-term, found a named term", &["term"])),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_context(text: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.context()?;
    p.finish()?;
    Ok(c)
}

// ---- printing ----

fn write_stack(out: &mut String, s: &Stack) {
    match s {
        Stack::Var(a) => out.push_str(a.as_str()),
        Stack::Nil => out.push_str("nil"),
        Stack::Cdr(inner) => {
            out.push_str("cdr(");
            write_stack(out, inner);
            out.push(')');
        }
        Stack::Cons(head, tail) => {
            write_head(out, head);
            out.push_str(" :: ");
            write_stack(out, tail);
        }
    }
}

// a mu-term would swallow everything to its right
fn write_head(out: &mut String, m: &Term) {
    match m {
        Term::Mu(..) => {
            out.push('(');
            write_term(out, m);
            out.push(')');
        }
        Term::Car(_) => write_term(out, m),
    }
}

fn write_term(out: &mut String, m: &Term) {
    match m {
        Term::Mu(a, p) => {
            out.push_str("mu ");
            out.push_str(a.as_str());
            out.push_str(". ");
            write_process(out, p);
        }
        Term::Car(s) => {
            out.push_str("car(");
            write_stack(out, s);
            out.push(')');
        }
    }
}

fn write_process(out: &mut String, p: &Process) {
    write_head(out, &p.term);
    out.push_str(" * ");
    write_stack(out, &p.stack);
}

pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Stack(s) => print_stack(s),
        Expr::Term(t) => print_term(t),
        Expr::Process(p) => print_process(p),
    }
}

pub fn print_stack(s: &Stack) -> String {
    let mut out = String::new();
    write_stack(&mut out, s);
    out
}

pub fn print_term(m: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, m);
    out
}

pub fn print_process(p: &Process) -> String {
    let mut out = String::new();
    write_process(&mut out, p);
    out
}

fn write_lterm(out: &mut String, t: &LTerm) {
    match t {
        LTerm::Var(x) => out.push_str(x.as_str()),
        LTerm::Lam(x, body) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push_str(". ");
            write_lterm(out, body);
        }
        LTerm::Mu(a, p) => {
            out.push_str("mu ");
            out.push_str(a.as_str());
            out.push_str(". ");
            write_lproc(out, p);
        }
        LTerm::App(f, arg) => {
            match **f {
                LTerm::Var(_) | LTerm::App(..) => write_lterm(out, f),
                _ => {
                    out.push('(');
                    write_lterm(out, f);
                    out.push(')');
                }
            }
            out.push(' ');
            match **arg {
                LTerm::Var(_) => write_lterm(out, arg),
                _ => {
                    out.push('(');
                    write_lterm(out, arg);
                    out.push(')');
                }
            }
        }
    }
}

fn write_lproc(out: &mut String, p: &LProc) {
    out.push('[');
    out.push_str(p.name.as_str());
    out.push_str("] ");
    write_lterm(out, &p.body);
}

pub fn print_lterm(t: &LTerm) -> String {
    let mut out = String::new();
    write_lterm(&mut out, t);
    out
}

pub fn print_lproc(p: &LProc) -> String {
    let mut out = String::new();
    write_lproc(&mut out, p);
    out
}

pub fn print_lmu(e: &LExpr) -> String {
    match e {
        LExpr::Term(t) => print_lterm(t),
        LExpr::Proc(p) => print_lproc(p),
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(a) => out.push_str(a.as_str()),
        Formula::Falsum => out.push_str("false"),
        Formula::Arrow(l, r) => {
            if let Formula::Arrow(..) = **l {
                out.push('(');
                write_formula(out, l);
                out.push(')');
            } else {
                write_formula(out, l);
            }
            out.push_str(" -> ");
            write_formula(out, r);
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

pub fn print_context(ctx: &Context) -> String {
    ctx.iter().map(|(name, f)| format!("{name}: {}", print_formula(f))).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_stack(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_process(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(self))
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_lterm(self))
    }
}

impl fmt::Display for LProc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_lproc(self))
    }
}

impl fmt::Display for LExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_lmu(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_context(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{app, car, cdr, cons, mu, nil, var};

    fn identity() -> Term {
        mu("a", app(car(var("a")), cdr(var("a"))))
    }

    #[test]
    fn parses_identity() {
        let e = parse_expr("mu a. car(a) * cdr(a)").unwrap();
        assert_eq!(e, Expr::Term(identity()));
    }

    #[test]
    fn cons_uses_double_colon() {
        assert!(parse_expr("car(m . nil)").is_err());
        let e = parse_expr("car((mu a. car(a)*a) :: nil)").unwrap();
        let omega = mu("a", app(car(var("a")), var("a")));
        assert_eq!(e, Expr::Term(car(cons(omega, nil()))));
    }

    #[test]
    fn car_requires_parentheses() {
        let err = parse_expr("car nil").unwrap_err();
        assert_eq!(err.span, SourceSpan { start: 4, end: 7 });
        assert!(err.expected.contains(&"`(`".to_string()));
    }

    #[test]
    fn cons_binds_tighter_than_application() {
        let e = parse_expr("mu a. car(a) * car(a) :: a").unwrap();
        let expected = mu("a", app(car(var("a")), cons(car(var("a")), var("a"))));
        assert_eq!(e, Expr::Term(expected));
    }

    #[test]
    fn parses_identity_reduction_example() {
        let e = parse_expr("(mu a. car(a)*cdr(a)) * (mu a. car(a)*cdr(a)) :: nil").unwrap();
        assert_eq!(e, Expr::Process(app(identity(), cons(identity(), nil()))));
    }

    #[test]
    fn rejects_sort_errors() {
        assert!(parse_expr("nil * nil").is_err());
        assert!(parse_expr("car(a) * car(a)").is_err());
        assert!(parse_expr("mu a. nil").is_err());
        assert!(parse_expr("(car(a) * a)").is_err());
        assert!(parse_expr("a :: nil").is_err());
        assert!(parse_expr("car(a) extra").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("mu a. car(a) # a").is_err());
    }

    #[test]
    fn error_spans_are_inside_input() {
        for text in ["car nil", "mu . x", "((", "a ::", "car(a) * mu", "é", "nil)"] {
            let err = parse_expr(text).unwrap_err();
            assert!(err.span.start <= err.span.end && err.span.end <= text.len(), "{text}: {err:?}");
            assert!(!err.message.is_empty());
        }
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        assert_eq!(print_term(&identity()), "mu a. car(a) * cdr(a)");
        assert_eq!(print_stack(&cons(identity(), nil())), "(mu a. car(a) * cdr(a)) :: nil");
        assert_eq!(print_formula(&Formula::arrow(Formula::Falsum, Formula::atom("a"))), "false -> a");
    }

    #[test]
    fn parses_lambda_mu() {
        assert_eq!(
            parse_lmu("\\x. x").unwrap(),
            LExpr::Term(LTerm::Lam(Name::new("x"), Box::new(LTerm::Var(Name::new("x")))))
        );
        let named = parse_lmu("[a] (mu b. [a] x)").unwrap();
        let expected = LExpr::Proc(LProc {
            name: Name::new("a"),
            body: LTerm::Mu(Name::new("b"), Box::new(LProc { name: Name::new("a"), body: LTerm::Var(Name::new("x")) })),
        });
        assert_eq!(named, expected);
        let callcc = parse_lterm("\\f. mu a. [a] (f (\\x. mu d. [a] x))").unwrap();
        assert_eq!(print_lterm(&callcc), "\\f. mu a. [a] f (\\x. mu d. [a] x)");
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse_lterm("f x y").unwrap();
        let f = LTerm::Var(Name::new("f"));
        let x = LTerm::Var(Name::new("x"));
        let y = LTerm::Var(Name::new("y"));
        let expected = LTerm::App(Box::new(LTerm::App(Box::new(f), Box::new(x))), Box::new(y));
        assert_eq!(t, expected);
        assert_eq!(print_lterm(&t), "f x y");
    }

    #[test]
    fn arrows_associate_right() {
        let f = parse_formula("a -> b -> c").unwrap();
        let expected = Formula::arrow(Formula::atom("a"), Formula::arrow(Formula::atom("b"), Formula::atom("c")));
        assert_eq!(f, expected);
        assert_eq!(parse_formula("false").unwrap(), Formula::Falsum);
        let peirce = parse_formula("((a -> b) -> a) -> a").unwrap();
        assert_eq!(print_formula(&peirce), "((a -> b) -> a) -> a");
    }

    #[test]
    fn parses_contexts() {
        let ctx = parse_context("x: a -> b, y: false").unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(print_context(&ctx), "x: a -> b, y: false");
        assert!(parse_context("").unwrap().is_empty());
        assert!(parse_context("x: a, x: b").is_err());
        assert!(parse_context("x a").is_err());
    }
}
