//! `lpenv`: envelopes, extremal pairs, invariant suites and tables.
//!
//! Exit status is 0 on success, 1 when a bound or invariant is violated and
//! 2 on invalid input.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lp_envelopes::measure::{sum_norm, triple_of_pair};
use lp_envelopes::oracle::{compare, interior_grid, EnvelopeKind};
use lp_envelopes::suites::{analysis_suite, oracle_suite, pair_suite, sum_suite, SuiteReport};
use lp_envelopes::{
    carlen_bound, eval_f, eval_g, extremal_f, extremal_g, lower_envelope, sum_and_report,
    upper_envelope, BoundReport, ConeTriple, Exponent, StepFunction,
};
use serde::Serialize;

use output::{csv_writer, float, json};

/// Relative slack on reported margins.
const SLACK: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "lpenv", version, about = "Sharp envelopes for ||f+g||_p^p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Envelopes at a triple, or bounds checked against two step functions.
    Bound(BoundArgs),
    /// The step-function pair attaining F_p or G_p at a triple.
    Extremal(ExtremalArgs),
    /// Run an invariant suite.
    Verify(VerifyArgs),
    /// Envelope values on a cross-section grid, as CSV.
    Table(TableArgs),
    /// Numerical envelope against the closed form on an interior grid, as CSV.
    OracleCompare(OracleArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct BoundArgs {
    #[arg(short)]
    p: f64,
    /// The triple (x, y, z).
    #[arg(num_args = 3, value_names = ["X", "Y", "Z"], required_unless_present = "f", conflicts_with = "f")]
    triple: Vec<f64>,
    /// Step function f as JSON.
    #[arg(long, requires = "g")]
    f: Option<PathBuf>,
    /// Step function g as JSON.
    #[arg(long, requires = "f")]
    g: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ExtremalArgs {
    #[arg(short)]
    p: f64,
    #[arg(num_args = 3, value_names = ["X", "Y", "Z"], required = true)]
    triple: Vec<f64>,
    #[arg(long, value_enum, default_value = "F")]
    which: Which,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Pair,
    Sum,
    Analysis,
    Oracle,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Option<Suite>,
    #[arg(long)]
    pair: bool,
    #[arg(long)]
    sum: bool,
    #[arg(long)]
    analysis: bool,
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples for the pair and sum suites.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Oracle resolution.
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Grid points per sign table.
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Also report the negative-exponent failure of the many-term bound.
    #[arg(long)]
    p_neg: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct TableArgs {
    #[arg(short, long = "p", value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Samples per axis of the cross-section.
    #[arg(long, default_value_t = 11)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Concave,
    Convex,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct OracleArgs {
    #[arg(short, long = "p", value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// The interior grid is grid × grid.
    #[arg(long, default_value_t = 20)]
    grid: usize,
    #[arg(long, value_enum, default_value = "concave")]
    kind: Kind,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Why a command stopped.
enum Failure {
    Violation,
    Invalid(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn exponent(p: f64) -> Result<Exponent, Failure> {
    Ok(Exponent::new(p)?)
}

fn triple(values: &[f64]) -> Result<ConeTriple, Failure> {
    Ok(ConeTriple::new(values[0], values[1], values[2])?)
}

fn read_function(path: &Path) -> Result<StepFunction, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn bound(args: BoundArgs) -> Outcome {
    let p = exponent(args.p)?;
    let report = match (&args.f, &args.g) {
        (Some(f), Some(g)) => sum_and_report(&read_function(f)?, &read_function(g)?, p)?,
        _ => BoundReport::at_triple(p, triple(&args.triple)?),
    };
    println!("{}", json(&report));
    if report.holds(SLACK) {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

#[derive(Serialize)]
struct ExtremalReport {
    p: f64,
    which: &'static str,
    triple: ConeTriple,
    realized: ConeTriple,
    target: f64,
    achieved: f64,
    deviation: f64,
    f: StepFunction,
    g: StepFunction,
}

fn extremal(args: ExtremalArgs) -> Outcome {
    let p = exponent(args.p)?;
    let t = triple(&args.triple)?;
    let (pair, target, which) = match args.which {
        Which::F => (extremal_f(p, &t)?, eval_f(p, &t), "F"),
        Which::G => (extremal_g(p, &t)?, eval_g(p, &t), "G"),
    };
    let realized = triple_of_pair(&pair.f, &pair.g, p.value())?;
    let achieved = sum_norm(&pair.f, &pair.g, p.value());
    let deviation = (achieved - target).abs() / target.abs().max(1.0);
    let ok = deviation <= SLACK && realized.relative_distance(&t) <= SLACK;
    println!(
        "{}",
        json(&ExtremalReport {
            p: p.value(),
            which,
            triple: t,
            realized,
            target,
            achieved,
            deviation,
            f: pair.f,
            g: pair.g,
        })
    );
    if ok {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn print_suite(report: &SuiteReport) {
    println!("suite {}", report.suite);
    println!("checks {}", report.checks);
    println!("skipped {}", report.skipped);
    println!("violations {}", report.violations);
    println!("worst_margin {}", float(report.worst_margin));
    for note in &report.notes {
        println!("note {note}");
    }
}

fn verify(args: VerifyArgs) -> Outcome {
    let flagged = [
        (args.pair, Suite::Pair),
        (args.sum, Suite::Sum),
        (args.analysis, Suite::Analysis),
        (args.oracle, Suite::Oracle),
    ];
    let mut chosen: Vec<Suite> = flagged.iter().filter(|f| f.0).map(|f| f.1).collect();
    chosen.extend(args.suite);
    chosen.dedup();
    let [suite] = chosen[..] else {
        return Err(Failure::Invalid("choose exactly one suite".into()));
    };
    let report = match suite {
        Suite::Pair => pair_suite(args.seed, args.samples),
        Suite::Sum => sum_suite(args.seed, args.samples, args.p_neg),
        Suite::Oracle => oracle_suite(args.n)?,
        Suite::Analysis => {
            let (report, table, torsion) = analysis_suite(args.points)?;
            println!("function,p,claim,samples,violations,min,max");
            for c in &table {
                println!(
                    "{},{},{:?},{},{},{},{}",
                    c.function,
                    float(c.p),
                    c.claim,
                    c.samples,
                    c.violations,
                    float(c.min),
                    float(c.max)
                );
            }
            for row in &torsion {
                println!(
                    "torsion p={} count={} location={} direction={:?} ok={}",
                    float(row.p),
                    row.crossings.count,
                    float(row.crossings.location),
                    row.crossings.direction,
                    row.ok
                );
            }
            report
        }
    };
    print_suite(&report);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn table(args: TableArgs) -> Outcome {
    if args.grid < 2 {
        return Err(Failure::Invalid("--grid must be at least 2".into()));
    }
    let exponents = args
        .p
        .iter()
        .map(|&p| exponent(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = csv_writer(args.out.as_deref())?;
    out.write_record(["p", "s", "z", "F", "G", "upper", "lower", "carlen"])?;
    let last = (args.grid - 1) as f64;
    for p in exponents {
        for i in 0..args.grid {
            let s = -1.0 + 2.0 * i as f64 / last;
            let top = ((1.0 - s) * (1.0 + s)).sqrt();
            // The diameter endpoints carry a single row.
            let heights = if top > 0.0 { args.grid } else { 1 };
            for j in 0..heights {
                let z = top * j as f64 / last;
                let t = ConeTriple::from_cross_section(s, z)?;
                out.write_record(
                    [
                        p.value(),
                        s,
                        z,
                        eval_f(p, &t),
                        eval_g(p, &t),
                        upper_envelope(p, &t),
                        lower_envelope(p, &t),
                        carlen_bound(p, &t),
                    ]
                    .map(float),
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn oracle_compare(args: OracleArgs) -> Outcome {
    if args.grid == 0 {
        return Err(Failure::Invalid("--grid must be positive".into()));
    }
    let kind = match args.kind {
        Kind::Concave => EnvelopeKind::Concave,
        Kind::Convex => EnvelopeKind::Convex,
    };
    let points = interior_grid(args.grid);
    let mut rows = Vec::new();
    for &p in &args.p {
        rows.extend(compare(exponent(p)?, args.n, &points, kind)?);
    }
    let mut out = csv_writer(args.out.as_deref())?;
    out.write_record(["p", "s", "z", "closed_form", "oracle", "abs_err", "N"])?;
    for r in rows {
        let mut record: Vec<String> = [r.p, r.s, r.z, r.closed_form, r.oracle, r.abs_err]
            .map(float)
            .to_vec();
        record.push(r.n.to_string());
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(args) => bound(args),
        Command::Extremal(args) => extremal(args),
        Command::Verify(args) => verify(args),
        Command::Table(args) => table(args),
        Command::OracleCompare(args) => oracle_compare(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Invalid(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
