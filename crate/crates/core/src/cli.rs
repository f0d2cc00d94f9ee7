//! Command-line front end. [`run`] takes the arguments and output streams
//! explicitly so that it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::{self, GoldenCheck};
use crate::dsl::parse_signature;
use crate::enumerate::{enumerate_steps, star_search};
use crate::error::{Error, Result};
use crate::model::{check_monad_laws, check_monad_laws_with, check_morphism_laws, mutant_subst, LawBounds, LawReport};
use crate::sample::{random_trace, rng};
use crate::signature::ReductionSignature;
use crate::trace::{endpoints, validate_star, validate_trace, StarTrace, StarTraceJson, Trace, TraceJson};
use crate::translate::{self, Translation};
use crate::validate::{validate_signature, ValidationMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_TRUNCATED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "redsig", version, about = "Reduction signatures: check, reduce, search, translate, test laws")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a signature.
    Check {
        #[command(flatten)]
        sig: SigArg,
    },
    /// List the one-step traces out of a term.
    Reduce {
        #[command(flatten)]
        sig: SigArg,
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 0)]
        ctx: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_FUEL, value_parser = positive)]
        fuel: usize,
        #[arg(long, default_value_t = 1000, value_parser = positive)]
        max: usize,
    },
    /// Search for a star trace from a term to a goal.
    Trace {
        #[command(flatten)]
        sig: SigArg,
        #[arg(long)]
        term: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 0)]
        ctx: usize,
        /// Maximum number of steps.
        #[arg(long, default_value_t = 4, value_parser = positive)]
        depth: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_FUEL, value_parser = positive)]
        fuel: usize,
    },
    /// Apply a built-in translation to a term or a trace.
    Translate {
        /// One of the built-in translations.
        name: String,
        #[arg(long, conflicts_with = "trace", required_unless_present = "trace")]
        term: Option<String>,
        #[arg(long, default_value_t = 0)]
        ctx: usize,
        /// A trace or star trace as JSON: a file path or `golden:NAME`.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Check the substitution, module and morphism laws on bounded samples.
    Laws {
        #[arg(long = "sig", value_name = "corpus:NAME|PATH", required_unless_present = "translation")]
        sig: Option<String>,
        /// Check the morphism laws of a built-in translation instead.
        #[arg(long, conflicts_with = "sig")]
        translation: Option<String>,
        #[arg(long, default_value_t = 2)]
        ctx: usize,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        depth: usize,
        #[arg(long, default_value_t = 2, value_parser = positive)]
        fuel: usize,
        /// Number of sampled traces for translation laws.
        #[arg(long, default_value_t = 100, value_parser = positive)]
        max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run against a deliberately broken substitution (or translation)
        /// to confirm that the checks catch it.
        #[arg(long)]
        self_test: bool,
        #[arg(long)]
        schematic: bool,
    },
}

#[derive(Debug, Args)]
pub struct SigArg {
    /// `corpus:NAME` or a path to a signature file.
    #[arg(long = "sig", value_name = "corpus:NAME|PATH")]
    pub sig: String,
    /// Validate a file only for well-formedness, not for matching.
    #[arg(long)]
    pub schematic: bool,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Loads a signature, returning validation diagnostics alongside it.
fn load_signature(spec: &str, schematic: bool) -> Result<(ReductionSignature, Vec<String>)> {
    let (sig, mode) = match spec.strip_prefix("corpus:") {
        Some(n) => {
            let e = corpus::entry(n)?;
            (parse_signature(e.source)?, e.mode)
        }
        None => {
            let src = std::fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
            let sig = parse_signature(&src).map_err(|e| match e {
                Error::Parse { line, col, msg } => Error::Parse {
                    line,
                    col,
                    msg: format!("{msg} (in {spec})"),
                },
                e => e,
            })?;
            let mode = if schematic {
                ValidationMode::Schematic
            } else {
                ValidationMode::Enumerable
            };
            (sig, mode)
        }
    };
    let diags = validate_signature(&sig, mode).iter().map(ToString::to_string).collect();
    Ok((sig, diags))
}

fn valid_signature(arg: &SigArg) -> Result<ReductionSignature> {
    let (sig, diags) = load_signature(&arg.sig, arg.schematic)?;
    match diags.first() {
        None => Ok(sig),
        Some(d) => Err(Error::Invalid(d.clone())),
    }
}

fn json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Json(e.to_string()))?;
    writeln!(out, "{s}").map_err(io)
}

fn io(e: std::io::Error) -> Error {
    Error::Invalid(format!("output: {e}"))
}

#[derive(Serialize)]
struct StepJson {
    source: String,
    target: String,
    trace: TraceJson,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    signature: &'a str,
    ops: usize,
    rules: usize,
    diagnostics: &'a [String],
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let human = cli.format == Format::Human;
    match &cli.command {
        Command::Check { sig } => {
            let (s, diags) = load_signature(&sig.sig, sig.schematic)?;
            if human {
                for d in &diags {
                    writeln!(out, "{d}").map_err(io)?;
                }
                if diags.is_empty() {
                    writeln!(out, "ok: `{}` with {} operations and {} rules", s.name, s.monad.ops.len(), s.rules.len())
                        .map_err(io)?;
                }
            } else {
                json(
                    out,
                    &CheckJson {
                        signature: &s.name,
                        ops: s.monad.ops.len(),
                        rules: s.rules.len(),
                        diagnostics: &diags,
                    },
                )?;
            }
            Ok(if diags.is_empty() { EXIT_OK } else { EXIT_INPUT })
        }

        Command::Reduce {
            sig,
            term,
            ctx,
            fuel,
            max,
        } => {
            let s = valid_signature(sig)?;
            let t = s.parse_term(term, *ctx)?;
            let steps = enumerate_steps(&s, *ctx, &t, *fuel)?;
            let truncated = steps.truncated || steps.traces.len() > *max;
            let shown = &steps.traces[..steps.traces.len().min(*max)];
            if human {
                for tr in shown {
                    let (a, b) = endpoints(&s, tr)?;
                    writeln!(out, "{tr}\n  {a} ~> {b}").map_err(io)?;
                }
                writeln!(out, "{} trace(s){}", shown.len(), if truncated { ", truncated" } else { "" }).map_err(io)?;
            } else {
                let v = shown
                    .iter()
                    .map(|tr| {
                        let (a, b) = endpoints(&s, tr)?;
                        Ok(StepJson {
                            source: a.to_string(),
                            target: b.to_string(),
                            trace: TraceJson::from(tr),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                json(out, &v)?;
            }
            Ok(if truncated { EXIT_TRUNCATED } else { EXIT_OK })
        }

        Command::Trace {
            sig,
            term,
            goal,
            ctx,
            depth,
            fuel,
        } => {
            let s = valid_signature(sig)?;
            let from = s.parse_term(term, *ctx)?;
            let to = s.parse_term(goal, *ctx)?;
            let r = star_search(&s, *ctx, &from, &to, *depth, *fuel)?;
            match (&r.trace, human) {
                (Some(st), true) => write_star(out, st)?,
                (Some(st), false) => json(out, &StarTraceJson::from(st))?,
                (None, true) => writeln!(
                    out,
                    "not found ({} terms explored{})",
                    r.explored,
                    if r.exhaustive { ", exhaustive" } else { ", bound reached" }
                )
                .map_err(io)?,
                (None, false) => writeln!(out, "null").map_err(io)?,
            }
            Ok(if r.trace.is_none() && !r.exhaustive { EXIT_TRUNCATED } else { EXIT_OK })
        }

        Command::Translate { name, term, ctx, trace } => {
            let tr = translate::builtin(name)?;
            if let Some(text) = term {
                let t = tr.source.parse_term(text, *ctx)?;
                let image = tr.fold_term(&t, *ctx)?;
                if human {
                    writeln!(out, "{image}").map_err(io)?;
                } else {
                    json(out, &serde_json::json!({ "context": ctx, "term": image.to_string() }))?;
                }
                return Ok(EXIT_OK);
            }
            let input = read_star(&tr, trace.as_deref().unwrap_or_default())?;
            let image = tr.fold_star(&input)?;
            if human {
                write_star(out, &image)?;
            } else {
                json(out, &StarTraceJson::from(&image))?;
            }
            Ok(EXIT_OK)
        }

        Command::Laws {
            sig,
            translation,
            ctx,
            depth,
            fuel,
            max,
            seed,
            self_test,
            schematic,
        } => {
            let reports = match (sig, translation) {
                (Some(spec), _) => {
                    let s = valid_signature(&SigArg {
                        sig: spec.clone(),
                        schematic: *schematic,
                    })?;
                    let bounds = LawBounds {
                        max_ctx: *ctx,
                        max_depth: *depth,
                        fuel: *fuel,
                        seed: *seed,
                        ..LawBounds::default()
                    };
                    if *self_test {
                        check_monad_laws_with(&s, &bounds, mutant_subst)
                    } else {
                        check_monad_laws(&s, &bounds)
                    }
                }
                (None, Some(name)) => {
                    let name = if *self_test { "fix-to-beta-star-mutant" } else { name.as_str() };
                    let tr = translate::builtin(name)?;
                    let samples = sample_traces(&tr, *ctx, *depth, *max, *seed);
                    check_morphism_laws(&tr, &samples, 2, 2, *seed)
                }
                (None, None) => return Err(Error::Invalid("laws needs --sig or --translation".into())),
            };
            write_reports(out, &reports, human)?;
            Ok(if reports.iter().all(LawReport::passed) { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn sample_traces(tr: &Translation, max_ctx: usize, depth: usize, count: usize, seed: u64) -> Vec<Trace> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 50 {
        attempts += 1;
        if let Some(t) = random_trace(&tr.source, out.len() % (max_ctx + 1), depth + 1, 2, &mut r) {
            out.push(t);
        }
    }
    out
}

/// Reads a trace (single step or star) for the source signature of `tr`.
fn read_star(tr: &Translation, spec: &str) -> Result<StarTrace> {
    let star = if let Some(g) = spec.strip_prefix("golden:") {
        match corpus::golden(g)?.check {
            GoldenCheck::Trace { trace } => StarTrace::try_from(&trace)?,
            _ => return Err(Error::Invalid(format!("golden `{g}` holds no trace"))),
        }
    } else {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
        match serde_json::from_str::<StarTraceJson>(&text) {
            Ok(j) => StarTrace::try_from(&j)?,
            Err(_) => {
                let j: TraceJson = serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))?;
                let t = Trace::try_from(&j)?;
                if let Some(e) = validate_trace(&tr.source, &t).first() {
                    return Err(Error::InvalidTrace(e.clone()));
                }
                crate::trace::star_single(&tr.source, t)?
            }
        }
    };
    match validate_star(&tr.source, &star).first() {
        Some(e) => Err(Error::InvalidTrace(e.clone())),
        None => Ok(star),
    }
}

fn write_star(out: &mut dyn Write, s: &StarTrace) -> Result<()> {
    writeln!(out, "{} ~>* {}  ({} step(s), ctx {})", s.source, s.target, s.len(), s.context).map_err(io)?;
    for (i, t) in s.steps.iter().enumerate() {
        writeln!(out, "  {}. {t}", i + 1).map_err(io)?;
    }
    Ok(())
}

fn write_reports(out: &mut dyn Write, reports: &[LawReport], human: bool) -> Result<()> {
    if !human {
        return json(out, &reports);
    }
    for r in reports {
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "[{tag}] {} ({} instances, seed {}, {})", r.law, r.instances, r.seed, r.bounds).map_err(io)?;
        for v in r.violations.iter().take(3) {
            writeln!(out, "    {}: {} vs {}", v.inputs, v.lhs, v.rhs).map_err(io)?;
        }
    }
    Ok(())
}
