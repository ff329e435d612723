//! `stackc`: batch front end to the stack calculus toolkit.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 step or search limit,
//! 3 negative result (type check failed, goal refuted).

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stackcalc::denote::{closed_den, den_to_json, enumerate, DEFAULT_DEPTH, DEFAULT_SIZE};
use stackcalc::frontend::{
    parse_context, parse_expr, parse_formula, parse_lmu, print_context, print_expr, print_formula, print_lmu,
    print_process, ParseError,
};
use stackcalc::lambdamu::{lmu_principal, translate_with, translated_judgement_context, LExpr, TranslateOptions};
use stackcalc::machine::{readback, run_with, trace_to_json as machine_trace_json, MachineOutcome, RunOptions};
use stackcalc::prover::{decide, ProofResult};
use stackcalc::reduction::{normalize_with, trace_to_json, NormalizeOptions, Outcome, Strategy, DEFAULT_MAX_STEPS};
use stackcalc::syntax::{Expr, Process, Stack, Term};
use stackcalc::typesys::{principal_typing, Formula, Judgement};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "stackc", version, about = "Stack calculus toolkit")]
struct Cli {
    /// Output format; `prove` defaults to json, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized strategies.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Input {
    /// Expression text; read from --file or stdin when absent.
    text: Option<String>,
    /// Read the expression from a file.
    #[arg(long, conflicts_with = "text")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Leftmost,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and echo an expression with its syntax tree.
    Parse {
        #[command(flatten)]
        input: Input,
        /// Parse a λμ-expression instead.
        #[arg(long)]
        lmu: bool,
    },
    /// Normalize an expression.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Also use the extensional rules.
        #[arg(long)]
        extensional: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Print every step.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: Order,
    },
    /// Principal typing of an expression.
    Infer {
        #[command(flatten)]
        input: Input,
        /// Typing context, e.g. "x: a -> b, y: a".
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Check an expression against a formula (omit it for processes).
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long = "type")]
        formula: Option<String>,
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Translate a λμ-expression.
    Translate {
        #[command(flatten)]
        input: Input,
        /// Also report the translated principal typing.
        #[arg(long)]
        typed: bool,
        /// Read `[top] t` as `t * nil`.
        #[arg(long)]
        top: bool,
        /// Normalize the translation.
        #[arg(long)]
        normalize: bool,
    },
    /// Decide a formula: a proof term or a countermodel.
    Prove {
        #[command(flatten)]
        input: Input,
        /// A hypothesis; may be repeated.
        #[arg(long = "hyp")]
        hyps: Vec<String>,
    },
    /// Run a closed process on the abstract machine.
    Run {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Print every state.
        #[arg(long)]
        trace: bool,
    },
    /// Closed denotation of a term within a bounded universe.
    Denote {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read input: {0}")]
    Io(#[from] io::Error),
}

/// What a command produced, with the exit code it implies.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

const LIMIT: u8 = 2;
const NEGATIVE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let default_format = if matches!(cli.command, Command::Prove { .. }) { Format::Json } else { Format::Text };
    let format = cli.format.unwrap_or(default_format);
    match execute(&cli.command, cli.seed) {
        Ok(report) => {
            let out = match format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("values serialize"),
            };
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.trim_end());
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_input(input: &Input) -> Result<String, CliError> {
    match (&input.text, &input.file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(path)) => Ok(fs::read_to_string(path)?),
        (None, None) => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn sort_name(e: &Expr) -> &'static str {
    match e {
        Expr::Stack(_) => "stack",
        Expr::Term(_) => "term",
        Expr::Process(_) => "process",
    }
}

fn stack_ast(s: &Stack) -> Value {
    match s {
        Stack::Var(a) => json!({"kind": "var", "name": a.as_str()}),
        Stack::Nil => json!({"kind": "nil"}),
        Stack::Cons(m, tail) => json!({"kind": "cons", "head": term_ast(m), "tail": stack_ast(tail)}),
        Stack::Cdr(inner) => json!({"kind": "cdr", "arg": stack_ast(inner)}),
    }
}

fn term_ast(m: &Term) -> Value {
    match m {
        Term::Mu(b, p) => json!({"kind": "mu", "binder": b.as_str(), "body": process_ast(p)}),
        Term::Car(s) => json!({"kind": "car", "arg": stack_ast(s)}),
    }
}

fn process_ast(p: &Process) -> Value {
    json!({"kind": "process", "term": term_ast(&p.term), "stack": stack_ast(&p.stack)})
}

fn expr_ast(e: &Expr) -> Value {
    match e {
        Expr::Stack(s) => stack_ast(s),
        Expr::Term(m) => term_ast(m),
        Expr::Process(p) => process_ast(p),
    }
}

fn judgement_text(j: &Judgement) -> String {
    let ctx = print_context(&j.context);
    let lhs = if ctx.is_empty() { String::new() } else { format!("{ctx} ") };
    match &j.formula {
        Some(f) => format!("{lhs}|- {} : {}", print_expr(&j.subject), print_formula(f)),
        None => format!("{lhs}|- {}", print_expr(&j.subject)),
    }
}

fn judgement_json(j: &Judgement) -> Value {
    json!({
        "subject": print_expr(&j.subject),
        "sort": sort_name(&j.subject),
        "formula": j.formula.as_ref().map(print_formula),
        "context": print_context(&j.context),
    })
}

fn execute(cmd: &Command, seed: u64) -> Result<Report, CliError> {
    match cmd {
        Command::Parse { input, lmu } => {
            let text = read_input(input)?;
            if *lmu {
                let e = parse_lmu(&text)?;
                let sort = if matches!(e, LExpr::Term(_)) { "lmu-term" } else { "lmu-process" };
                let shown = print_lmu(&e);
                return Ok(Report::ok(shown.clone(), json!({"sort": sort, "text": shown})));
            }
            let e = parse_expr(&text)?;
            let shown = print_expr(&e);
            Ok(Report::ok(shown.clone(), json!({"sort": sort_name(&e), "text": shown, "ast": expr_ast(&e)})))
        }
        Command::Reduce { input, extensional, max_steps, trace, strategy } => {
            let e = parse_expr(&read_input(input)?)?;
            let strategy = match strategy {
                Order::Leftmost => Strategy::LeftmostOutermost,
                Order::Random => Strategy::Random(seed),
            };
            let r = normalize_with(
                &e,
                &NormalizeOptions { extensional: *extensional, max_steps: *max_steps, strategy, record_trace: *trace },
            );
            let (last, normal) = match &r.outcome {
                Outcome::NormalForm(nf) => (nf, true),
                Outcome::StepLimitExceeded(last) => (last, false),
            };
            let mut text = String::new();
            if *trace {
                for step in &r.trace {
                    text.push_str(&format!(
                        "{} -{}-> {}\n",
                        print_expr(&step.before),
                        step.rule.as_str(),
                        print_expr(&step.after)
                    ));
                }
            }
            text.push_str(&print_expr(last));
            if !normal {
                text.push_str(&format!("\nstep limit of {max_steps} reached"));
            }
            let mut out = json!({
                "result": if normal { "normal-form" } else { "step-limit" },
                "expr": print_expr(last),
                "steps": r.steps,
            });
            if *trace {
                out["trace"] = trace_to_json(&r.trace);
            }
            Ok(Report { text, json: out, code: if normal { 0 } else { LIMIT } })
        }
        Command::Infer { input, context } => {
            let e = parse_expr(&read_input(input)?)?;
            let ctx = parse_context(context)?;
            Ok(match principal_typing(&e, &ctx) {
                Ok(j) => Report::ok(judgement_text(&j), json!({"result": "typed", "judgement": judgement_json(&j)})),
                Err(err) => Report {
                    text: format!("untypable: {err}"),
                    json: json!({"result": "untypable", "error": err.to_string()}),
                    code: NEGATIVE,
                },
            })
        }
        Command::Check { input, formula, context } => {
            let e = parse_expr(&read_input(input)?)?;
            let formula = formula.as_deref().map(parse_formula).transpose()?;
            if matches!(e, Expr::Process(_)) != formula.is_none() {
                return Err(CliError::Usage("processes take no --type, stacks and terms need one".into()));
            }
            let j = Judgement { subject: e, formula, context: parse_context(context)? };
            Ok(match j.check_diag() {
                Ok(()) => Report::ok(
                    format!("ok: {}", judgement_text(&j)),
                    json!({"result": "ok", "judgement": judgement_json(&j)}),
                ),
                Err(err) => Report {
                    text: format!("rejected: {err}"),
                    json: json!({"result": "rejected", "error": err.to_string(), "judgement": judgement_json(&j)}),
                    code: NEGATIVE,
                },
            })
        }
        Command::Translate { input, typed, top, normalize } => {
            let e = parse_lmu(&read_input(input)?)?;
            let opts = TranslateOptions { top: *top };
            let tr = translate_with(&e, opts);
            let mut expr = tr.expr.clone();
            if *normalize {
                let r = normalize_with(&expr, &NormalizeOptions { record_trace: false, ..Default::default() });
                match r.outcome {
                    Outcome::NormalForm(nf) => expr = nf,
                    Outcome::StepLimitExceeded(_) => {
                        return Ok(Report {
                            text: "step limit reached while normalizing".into(),
                            json: json!({"result": "step-limit"}),
                            code: LIMIT,
                        })
                    }
                }
            }
            let mut text = print_expr(&expr);
            let mut out = json!({"result": "translated", "expr": print_expr(&expr), "sort": sort_name(&expr)});
            if *typed {
                let typing = match lmu_principal(&e) {
                    Ok(t) => t,
                    Err(err) => {
                        return Ok(Report {
                            text: format!("untypable: {err}"),
                            json: json!({"result": "untypable", "error": err.to_string()}),
                            code: NEGATIVE,
                        })
                    }
                };
                let j = Judgement {
                    subject: expr.clone(),
                    formula: typing.formula.clone(),
                    context: translated_judgement_context(&e, &typing.gamma, &typing.delta, opts),
                };
                let checks = j.check();
                text = judgement_text(&j);
                out["judgement"] = judgement_json(&j);
                out["checks"] = json!(checks);
                if !checks {
                    return Ok(Report { text: format!("{text}\ndoes not check"), json: out, code: NEGATIVE });
                }
            }
            Ok(Report::ok(text, out))
        }
        Command::Prove { input, hyps } => {
            let goal = parse_formula(&read_input(input)?)?;
            let hyps = hyps.iter().map(|h| parse_formula(h)).collect::<Result<Vec<Formula>, _>>()?;
            let r = decide(&goal, &hyps);
            let text = match &r {
                ProofResult::Proof { term, goal, hyps } => {
                    let j =
                        Judgement { subject: term.clone().into(), formula: Some(goal.clone()), context: hyps.clone() };
                    judgement_text(&j)
                }
                ProofResult::Countermodel { valuation, .. } => {
                    let parts: Vec<String> = valuation.0.iter().map(|(a, v)| format!("{a} = {v}")).collect();
                    format!("countermodel: {}", parts.join(", "))
                }
            };
            Ok(Report { text, json: r.to_json(), code: if r.is_proof() { 0 } else { NEGATIVE } })
        }
        Command::Run { input, max_steps, trace } => {
            let e = parse_expr(&read_input(input)?)?;
            let Expr::Process(p) = e else {
                return Err(CliError::Usage(format!("the machine runs processes, not a {}", sort_name(&e))));
            };
            let r =
                run_with(&p, RunOptions { max_steps: *max_steps, trace_capacity: if *trace { None } else { Some(1) } });
            let last = print_process(&readback(&r.last));
            let mut text = String::new();
            if *trace {
                for (i, s) in r.trace.iter().enumerate() {
                    text.push_str(&format!("{i}: {}\n", print_process(&readback(s))));
                }
            }
            text.push_str(&format!("{last}\n{} after {} steps", r.outcome, r.steps));
            let mut out = json!({
                "outcome": r.outcome.to_string(),
                "steps": r.steps,
                "final": last,
                "state": r.last.to_json(),
            });
            if *trace {
                out["trace"] = machine_trace_json(&r.trace);
            }
            let code = if r.outcome == MachineOutcome::StepLimit { LIMIT } else { 0 };
            Ok(Report { text, json: out, code })
        }
        Command::Denote { input, depth, size } => {
            let e = parse_expr(&read_input(input)?)?;
            let Expr::Term(m) = e else {
                return Err(CliError::Usage(format!("closed denotations are of terms, not a {}", sort_name(&e))));
            };
            let u = enumerate(*depth, *size);
            let set = closed_den(&m, &u).map_err(|err| CliError::Usage(err.to_string()))?;
            let text = set.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            Ok(Report::ok(text, den_to_json(&set)))
        }
    }
}
