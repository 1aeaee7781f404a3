//! `ineqrec`: verification campaigns, proof traces, exponent enumeration,
//! tightness search and negative-control mutation runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ineqrec::gen::{
    counterexample_search, enumerate_integer_conjugate_tuples, tightness_search, ExponentMode,
    GenSpec, MutationKind, Seed,
};
use ineqrec::inequality::{CheckConfig, CheckMode, Verdict};
use ineqrec::instance::{Instance, StatementKind};
use ineqrec::numeric::DEFAULT_SCHEDULE;
use ineqrec::report::{exit, exit_code, outcomes_csv, run_campaign, CampaignParams, Counts, TOOL_VERSION};
use ineqrec::trace::{trace_instance, verify_trace};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ineqrec", version, about = "Rigorous checks of Hölder-type inequalities and n-gon Menelaus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded campaign of generated instances through a checker.
    Verify(VerifyArgs),
    /// Emit the recurrence trace of one instance and verify it.
    Trace(TraceArgs),
    /// List every integer tuple with Σ 1/p_k = 1 and all p_k ≥ 2.
    EnumerateExponents(EnumerateArgs),
    /// Hill-climb toward the equality case and report the best slack ratio.
    SearchTight(TightArgs),
    /// Negative control: break one hypothesis and search for a violation.
    Mutate(MutateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Interval,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpMode {
    IntegerTuples,
    RationalWeights,
}

/// Generator flags; each overrides the matching `--config` field.
#[derive(Args)]
struct GenFlags {
    /// Rows (polygon vertices for menelaus): `N` or `LO..=HI`.
    #[arg(long)]
    n: Option<String>,
    /// Columns: `M` or `LO..=HI`.
    #[arg(long)]
    m: Option<String>,
    /// JSON file with generator fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    num_bits: Option<u32>,
    #[arg(long)]
    den_bits: Option<u32>,
    #[arg(long, value_enum)]
    exponent_mode: Option<ExpMode>,
    #[arg(long)]
    equality_percent: Option<u32>,
}

#[derive(Args)]
struct CheckFlags {
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Largest working precision in bits for interval refinement.
    #[arg(long)]
    precision_cap: Option<u32>,
    /// Skip the closed-form equality characterizations.
    #[arg(long)]
    no_equality_shortcuts: bool,
}

#[derive(Args)]
struct VerifyArgs {
    statement: StatementKind,
    #[command(flatten)]
    gen: GenFlags,
    #[command(flatten)]
    check: CheckFlags,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: Seed,
    /// Exit 2 when more instances than this are Undetermined.
    #[arg(long)]
    max_undetermined: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TraceArgs {
    statement: StatementKind,
    instance: PathBuf,
    #[command(flatten)]
    check: CheckFlags,
    #[arg(long)]
    max_undetermined: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TightArgs {
    statement: StatementKind,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 500)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: Seed,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MutateArgs {
    statement: StatementKind,
    /// Hypothesis to break: conjugacy, direction, sort or transversal.
    #[arg(long = "break")]
    mutation: MutationKind,
    #[arg(long, default_value_t = 1000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: Seed,
    #[command(flatten)]
    gen: GenFlags,
    #[command(flatten)]
    check: CheckFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let parse = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad size {t:?}"));
    match s.split_once("..=") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi)?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

fn gen_spec(statement: StatementKind, flags: &GenFlags) -> Result<GenSpec> {
    let mut spec = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut v: serde_json::Value = serde_json::from_str(&text).context("parsing config")?;
            if let Some(obj) = v.as_object_mut() {
                match obj.get("statement").and_then(|s| s.as_str()) {
                    Some(s) if s != statement.name() => {
                        bail!("config is for {s}, command is for {statement}")
                    }
                    _ => {
                        // Unset fields take the statement's defaults.
                        let defaults = serde_json::to_value(GenSpec::for_statement(statement))?;
                        for (k, d) in defaults.as_object().expect("struct").iter() {
                            obj.entry(k.clone()).or_insert_with(|| d.clone());
                        }
                    }
                }
            }
            serde_json::from_value(v).context("parsing config")?
        }
        None => GenSpec::for_statement(statement),
    };
    if let Some(n) = &flags.n {
        let (lo, hi) = parse_range(n)?;
        spec = spec.with_n(lo, hi);
    }
    if let Some(m) = &flags.m {
        let (lo, hi) = parse_range(m)?;
        spec = spec.with_m(lo, hi);
    }
    if let Some(b) = flags.num_bits {
        spec.num_bits = b;
    }
    if let Some(b) = flags.den_bits {
        spec.den_bits = b;
    }
    if let Some(e) = flags.exponent_mode {
        spec.exponent_mode = match e {
            ExpMode::IntegerTuples => ExponentMode::IntegerTuples,
            ExpMode::RationalWeights => ExponentMode::RationalWeights,
        };
    }
    if let Some(p) = flags.equality_percent {
        spec.equality_percent = p;
    }
    spec.validate()?;
    Ok(spec)
}

fn check_config(flags: &CheckFlags) -> Result<CheckConfig> {
    let mut cfg = CheckConfig::default();
    if let Mode::Interval = flags.mode {
        cfg.mode = CheckMode::IntervalOnly;
    }
    cfg.equality_detection = !flags.no_equality_shortcuts;
    if let Some(cap) = flags.precision_cap {
        let schedule: Vec<u32> = DEFAULT_SCHEDULE.iter().copied().filter(|&p| p <= cap).collect();
        cfg.precision_schedule = if schedule.is_empty() { vec![cap] } else { schedule };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn cmd_verify(a: &VerifyArgs, command: &str) -> Result<i32> {
    let spec = gen_spec(a.statement, &a.gen)?;
    let cfg = check_config(&a.check)?;
    let mut params = CampaignParams::new(spec, &cfg);
    params.max_undetermined = a.max_undetermined;
    let campaign = run_campaign(command, a.seed, a.trials, params)?;
    let r = &campaign.report;
    let text = match a.format {
        Format::Json => r.to_json(),
        Format::Csv => outcomes_csv(&campaign.outcomes)?,
    };
    emit(a.out.as_deref(), &text)?;
    eprintln!(
        "{}: {} trials, holds {}, equality {}, undetermined {}, violated {} ({} ms)",
        r.statement, r.trials, r.counts.holds, r.counts.equality, r.counts.undetermined, r.counts.violated, r.runtime_ms
    );
    Ok(r.exit_code())
}

fn cmd_trace(a: &TraceArgs) -> Result<i32> {
    let text = fs::read_to_string(&a.instance).with_context(|| format!("reading {}", a.instance.display()))?;
    let inst = Instance::from_json_for(a.statement, &text)?;
    let cfg = check_config(&a.check)?;
    let trace = trace_instance(&inst)?;
    let verdict = verify_trace(&trace, &cfg)?;
    emit(a.out.as_deref(), &pretty(&json!({ "trace": trace, "verdict": verdict })))?;
    eprintln!(
        "{}: {} steps, bookkeeping {}, overall {}",
        trace.statement,
        trace.steps.len(),
        if verdict.bookkeeping_ok { "ok" } else { "FAILED" },
        verdict.overall.label()
    );
    let mut counts = Counts::default();
    counts.record(&verdict.overall);
    Ok(exit_code(&counts, a.max_undetermined))
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<i32> {
    let tuples = enumerate_integer_conjugate_tuples(a.m)?;
    let text = match a.format {
        Format::Json => pretty(&json!({ "m": a.m, "count": tuples.len(), "tuples": tuples })),
        Format::Csv => tuples
            .iter()
            .map(|t| t.iter().map(u64::to_string).collect::<Vec<_>>().join(",") + "\n")
            .collect(),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(exit::OK)
}

fn cmd_search_tight(a: &TightArgs, command: &str) -> Result<i32> {
    let start = Instant::now();
    let r = tightness_search(a.statement, (a.n, a.m), a.budget, a.seed)?;
    let lo = r.slack.enclosure.lo_rational();
    let hi = r.slack.enclosure.hi_rational();
    let report = json!({
        "command": command,
        "seed": a.seed,
        "statement": a.statement,
        "n": a.n,
        "m": a.m,
        "budget": a.budget,
        "evaluations": r.evaluations,
        "improvements": r.improvements,
        "best_instance": r.instance,
        "best_slack": r.slack,
        "best_ratio": r.slack.midpoint(),
        "runtime_ms": start.elapsed().as_millis() as u64,
        "tool_version": TOOL_VERSION,
    });
    emit(a.out.as_deref(), &pretty(&report))?;
    eprintln!("{}: best slack ratio in [{}, {}]", a.statement, lo.to_f64(), hi.to_f64());
    // A certified ratio above 1 would be a violation of the statement.
    Ok(if lo > ineqrec::numeric::Rational::one() { exit::VIOLATED } else { exit::OK })
}

fn cmd_mutate(a: &MutateArgs, command: &str) -> Result<i32> {
    let spec = gen_spec(a.statement, &a.gen)?;
    let cfg = check_config(&a.check)?;
    let start = Instant::now();
    let out = counterexample_search(&spec, Some(a.mutation), a.budget, a.seed, &cfg)?;
    let found = out.found.is_some();
    let report = json!({
        "command": command,
        "seed": a.seed,
        "statement": a.statement,
        "mutation": a.mutation,
        "budget": a.budget,
        "parameters": spec,
        "tried": out.tried,
        "skipped": out.skipped,
        "found": found,
        "witness": out.found,
        "runtime_ms": start.elapsed().as_millis() as u64,
        "tool_version": TOOL_VERSION,
    });
    emit(a.out.as_deref(), &pretty(&report))?;
    match &out.found {
        Some(ce) => eprintln!(
            "{} / {}: violation found at index {} after {} trials, shrunk in {} steps to n = {}",
            a.statement,
            a.mutation,
            ce.index,
            out.tried,
            ce.steps.len(),
            ce.shrunk.instance.dims().0
        ),
        None => eprintln!("{} / {}: no violation in {} trials; the control FAILED", a.statement, a.mutation, out.tried),
    }
    debug_assert!(out.found.as_ref().is_none_or(|c| matches!(c.shrunk_verdict, Verdict::Violated { .. })));
    // Finding the violation is the pass condition of a negative control.
    Ok(if found { exit::OK } else { exit::VIOLATED })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let command = std::iter::once("ineqrec")
        .chain(args.iter().skip(1).map(String::as_str))
        .collect::<Vec<_>>()
        .join(" ");
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a, &command),
        Command::Trace(a) => cmd_trace(a),
        Command::EnumerateExponents(a) => cmd_enumerate(a),
        Command::SearchTight(a) => cmd_search_tight(a, &command),
        Command::Mutate(a) => cmd_mutate(a, &command),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}
