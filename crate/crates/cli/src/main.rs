// SPDX-License-Identifier: Apache-2.0

//! `cdd`: compile decoupling sequences, run seeded bath simulations, fit decay
//! curves and evaluate the distance bounds.
//!
//! Tables (TSV/CSV) go to `--out` or stdout. The JSON summary goes to stdout
//! when `--out` is given and to stderr otherwise, so either stream can be
//! piped. Failures print `{"error": {"kind", "message"}}` on stderr and exit
//! with status 1 (2 for usage errors).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cdd_core::harness::{self, ExperimentConfig};
use cdd_core::metrics::{fit_exponential, DecayCurve};
use cdd_core::sequence::{SequenceCompiler, TimeBase, TimingParams, DEFAULT_MAX_EVENTS};
use cdd_core::theory;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "cdd", version, about = "Concatenated dynamical decoupling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run free/PDD/CDD evolution for every bath seed and write decay curves as CSV.
    Simulate(RunArgs),
    /// Sweep τ₀, fit each repeated-cycle curve and write the rate table as CSV.
    Sweep(SweepArgs),
    /// Compile one CDD or PDD schedule and write it as TSV.
    Sequence(SequenceArgs),
    /// Fit S(t) = S₀·exp(−t/T₂) to a two-column CSV of (time, signal).
    Fit(FitArgs),
    /// Evaluate ε, the CDD/PDD distance bounds and level selection.
    Theory(TheoryArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment config; omitted keys take their defaults.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override the number of bath seeds.
    #[arg(long)]
    seeds: Option<usize>,
    /// Override the first bath seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Also write the per-seed decay curves behind the fits.
    #[arg(long)]
    curves: Option<PathBuf>,
}

#[derive(Args)]
struct SequenceArgs {
    /// CDD level.
    #[arg(long, short, conflicts_with = "pdd", required_unless_present = "pdd")]
    level: Option<u32>,
    /// Number of PDD cycles instead of a CDD level.
    #[arg(long)]
    pdd: Option<usize>,
    /// Repeat the whole schedule this many times.
    #[arg(long, default_value_t = 1)]
    cycles: usize,
    /// Free-evolution interval.
    #[arg(long)]
    tau0: f64,
    /// π-pulse width.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Delay inserted between pulses on different axes.
    #[arg(long, default_value_t = 0.0)]
    fa: f64,
    /// Ordered base pair, outer then inner axis.
    #[arg(long, default_value = "ZX")]
    pair: String,
    /// Integer ticks per time unit (1000 = 1 ns ticks with µs units).
    #[arg(long, default_value_t = 1000)]
    ticks_per_unit: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_EVENTS)]
    max_events: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// CSV with time and signal columns; `-` reads stdin. A non-numeric
    /// first row is treated as a header.
    input: PathBuf,
}

#[derive(Args)]
struct TheoryArgs {
    /// System–bath coupling strength J.
    #[arg(long)]
    j: f64,
    /// Bath strength β.
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    tau0: f64,
    /// CDD level for ε and the bounds.
    #[arg(long)]
    level: Option<u32>,
    /// Target distance for the required level.
    #[arg(long)]
    target: Option<f64>,
    /// PDD pulse count for the PDD bound (default 4^level).
    #[arg(long)]
    pulses: Option<u64>,
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl From<cdd_core::Error> for Failure {
    fn from(e: cdd_core::Error) -> Self {
        Failure { kind: e.kind(), message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { kind: "io", message: e.to_string() }
    }
}

fn fail(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure { kind, message: message.into() }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            report_error(&fail("usage", e.render().to_string().trim()));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Sequence(a) => sequence(a),
        Command::Fit(a) => fit(a),
        Command::Theory(a) => run_theory(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report_error(&f);
            ExitCode::FAILURE
        }
    }
}

fn report_error(f: &Failure) {
    let record = json!({ "error": { "kind": f.kind, "message": f.message } });
    eprintln!("{record}");
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("summaries serialize")
}

/// Writes `table` to `out` (or stdout) and the summary to the other stream.
fn emit(table: &str, out: Option<&Path>, summary: &impl Serialize) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, table).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
            println!("{}", to_json(summary));
        }
        None => {
            io::stdout().write_all(table.as_bytes())?;
            eprintln!("{}", to_json(summary));
        }
    }
    Ok(())
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg: ExperimentConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| fail("invalid_config", e.to_string()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(n) = args.seeds {
        cfg.seeds = n;
    }
    if let Some(s) = args.seed {
        cfg.bath.seed = s;
    }
    Ok(cfg)
}

fn simulate(args: RunArgs) -> Outcome {
    let cfg = load_config(&args)?;
    let result = harness::run_experiment(&cfg)?;
    let csv = harness::curves_csv(&result)?;
    let curves: Vec<_> = result
        .curves
        .iter()
        .map(|c| {
            let last = c.points.last();
            let fit = c.decay_curve().and_then(|d| fit_exponential(&d));
            json!({
                "label": c.label,
                "tau0": c.tau0,
                "points": c.points.len(),
                "final_time": last.map(|p| p.total_time),
                "final_signal": last.map(|p| p.signal),
                "final_distance": last.map(|p| p.distance),
                "fit": fit.as_ref().ok(),
                "fit_error": fit.as_ref().err().map(|e| e.to_string()),
            })
        })
        .collect();
    let summary = json!({ "j": result.j, "beta": result.beta, "seeds": result.seeds, "curves": curves });
    emit(&csv, args.out.as_deref(), &summary)
}

fn sweep(args: SweepArgs) -> Outcome {
    let cfg = load_config(&args.run)?;
    let result = harness::sweep_tau0(&cfg)?;
    if let Some(path) = &args.curves {
        let csv = harness::curves_csv(&result.experiment)?;
        fs::write(path, csv).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
    }
    let table = &result.table;
    let series: serde_json::Map<_, _> =
        table.labels().into_iter().map(|l| (l.clone(), json!(table.series(&l)))).collect();
    let summary = json!({
        "rows": table.rows.len(),
        "failed_fits": table.rows.iter().filter(|r| r.fit.is_none()).count(),
        "rates": series,
    });
    emit(&harness::rates_csv(table)?, args.run.out.as_deref(), &summary)
}

fn sequence(args: SequenceArgs) -> Outcome {
    let compiler = SequenceCompiler::new(args.pair.parse()?, args.max_events);
    let timing = TimingParams::from_units(args.tau0, args.delta, args.fa, TimeBase::new(args.ticks_per_unit)?)?;
    let mut schedule = match (args.level, args.pdd) {
        (Some(n), _) => compiler.cdd(n, timing)?,
        (None, Some(k)) => compiler.pdd(k, timing)?,
        (None, None) => unreachable!("clap requires one of --level/--pdd"),
    };
    if args.cycles == 0 {
        return Err(fail("invalid_config", "cycles must be at least 1"));
    }
    if args.cycles > 1 {
        let requested = schedule.events.len() as u128 * args.cycles as u128;
        if requested > args.max_events as u128 {
            return Err(cdd_core::Error::ScheduleTooLarge { requested, limit: args.max_events }.into());
        }
        let label = format!("{}x{}", schedule.label, args.cycles);
        schedule = schedule.repeat(args.cycles, label);
    }
    emit(&schedule.to_tsv(), args.out.as_deref(), &schedule.summary())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(f64, f64)>, Failure> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut pairs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| fail("invalid_input", e.to_string()))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() < 2 {
            return Err(fail("invalid_input", format!("line {line}: expected two columns")));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(t), Ok(s)) => pairs.push((t, s)),
            _ if i == 0 => continue,
            _ => return Err(fail("invalid_input", format!("line {line}: non-numeric value"))),
        }
    }
    Ok(pairs)
}

fn fit(args: FitArgs) -> Outcome {
    let pairs = parse_pairs(&read_input(&args.input)?)?;
    let result = fit_exponential(&DecayCurve::from_pairs(pairs)?)?;
    println!("{}", to_json(&result));
    Ok(())
}

fn run_theory(args: TheoryArgs) -> Outcome {
    let report = theory::report(args.j, args.beta, args.tau0, args.level, args.target, args.pulses)?;
    println!("{}", to_json(&report));
    Ok(())
}
