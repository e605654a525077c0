use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use kbvz::bench::{bench_csv_header, bench_csv_row, jbound_scatter, run_benchmark, BenchStrategy, SampleSpec, ScatterDomain};
use kbvz::genfunc::{moment_rows, Moments};
use kbvz::minimality::verify_layer_minimality;
use kbvz::representation::project_sn;
use kbvz::solver::{j_bound, solve};
use kbvz::spectral::SpectralData;
use kbvz::statistics::{dn_points, gap_histogram, gap_rows, layer_stats};
use kbvz::{BoundStrategy, Error, KBonacciContext, Solver, VecZ};

/// k-bonacci vector Zeckendorf representations.
#[derive(Parser)]
#[command(name = "kbvz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Satisfying representation of a vector.
    Decompose {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vec)]
        v: VecZ,
        #[arg(long, default_value = "small")]
        strategy: Solver,
        /// Largest index searched by the brute-force solver.
        #[arg(long, default_value_t = 20)]
        brute_max_index: usize,
        #[arg(long)]
        json: bool,
    },
    /// Upper bound on the largest index of the representation.
    Jbound {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vec)]
        v: VecZ,
        #[arg(long, default_value = "small")]
        strategy: BoundStrategy,
    },
    /// The projection `S_n(v)`.
    Project {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vec)]
        v: VecZ,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Summand-count distribution on layers `1..=n`.
    LayerStats {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Gap distribution on layer `n` with the limiting law.
    Gaps {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Exact moments from the generating functions.
    Genfunc {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Characteristic roots and derived constants.
    Spectral {
        #[arg(long)]
        k: usize,
    },
    /// Bounded search for representations with fewer summands.
    Minimality {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        layer: usize,
        #[arg(long)]
        max_index: usize,
    },
    /// Times every solver on random vectors and writes CSV.
    Bench {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        norm_bound: i64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks `j_lsb <= c ln||v||_2 + d` over every nonzero vector in a box.
    Scatter {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        norm_bound: i64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
        /// Sample this many vectors instead of the whole box.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write every point as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every vector of `D_n` with its largest index, as CSV.
    DnPoints {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_vec(s: &str) -> Result<VecZ, String> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|e| e.trim().parse::<BigInt>().map_err(|err| format!("bad entry `{e}`: {err}")))
        .collect::<Result<Vec<_>, _>>()
        .map(VecZ::new)
}

enum Failure {
    Core(Error),
    Invariant(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// 2 for rejected input, 3 for a failed internal check.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::IndexOutOfDomain { .. }
        | Error::UnsupportedOrder { .. }
        | Error::DimensionMismatch { .. }
        | Error::ZeroVector
        | Error::NotSatisfying(_)
        | Error::InvalidIndexSet(_)
        | Error::VectorTooLarge
        | Error::NotFound { .. }
        | Error::BudgetExhausted { .. } => 2,
        _ => 3,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn print_csv<T: Serialize>(rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose { k, v, strategy, brute_max_index, json } => {
            let ctx = KBonacciContext::new(k)?;
            let s = solve(&ctx, &v, strategy, brute_max_index)?;
            if json {
                print_json(&serde_json::json!({ "indices": s.indices() }))?;
            } else {
                let terms: Vec<String> = s.indices().iter().rev().map(|i| format!("X_-{i}")).collect();
                println!("{v} = {}", if terms.is_empty() { "0".to_string() } else { terms.join(" + ") });
            }
        }
        Command::Jbound { k, v, strategy } => {
            let ctx = KBonacciContext::new(k)?;
            println!("{}", j_bound(&ctx, &v, strategy)?.value);
        }
        Command::Project { k, v, n } => {
            let ctx = KBonacciContext::new(k)?;
            println!("{}", project_sn(&ctx, &v, n)?);
        }
        Command::LayerStats { k, n, csv } => {
            let ctx = KBonacciContext::new(k)?;
            let stats = (1..=n).map(|i| layer_stats(&ctx, i)).collect::<kbvz::Result<Vec<_>>>()?;
            if csv {
                let rows: Vec<kbvz::statistics::LayerRow> = stats.iter().map(Into::into).collect();
                print_csv(&rows)?;
            } else {
                print_json(&stats)?;
            }
        }
        Command::Gaps { k, n, csv } => {
            let ctx = KBonacciContext::new(k)?;
            let spectral = SpectralData::compute(&ctx)?;
            let rows = gap_rows(&gap_histogram(&ctx, n)?, &spectral);
            if csv {
                print_csv(&rows)?;
            } else {
                print_json(&rows)?;
            }
        }
        Command::Genfunc { k, n_max, csv } => {
            let rows = moment_rows(&Moments::compute(k, n_max)?);
            if csv {
                print_csv(&rows)?;
            } else {
                print_json(&rows)?;
            }
        }
        Command::Spectral { k } => {
            let ctx = KBonacciContext::new(k)?;
            print_json(&SpectralData::compute(&ctx)?)?;
        }
        Command::Minimality { k, layer, max_index } => {
            let ctx = KBonacciContext::new(k)?;
            let report = verify_layer_minimality(&ctx, layer, max_index)?;
            print_json(&report)?;
            if let Some(c) = report.counterexamples.first() {
                return Err(Failure::Invariant(format!(
                    "{} counterexamples, first {} with {} summands",
                    report.counterexamples.len(),
                    c.v,
                    c.smaller
                )));
            }
        }
        Command::Bench { k, norm_bound, count, seed, out } => {
            let spec = SampleSpec { k, norm_bound, count, seed };
            let records = run_benchmark(&spec, &BenchStrategy::ALL)?;
            let mut w = csv::Writer::from_writer(File::create(&out)?);
            w.write_record(bench_csv_header(k))?;
            for r in &records {
                w.write_record(bench_csv_row(r))?;
            }
            w.flush()?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Scatter { k, norm_bound, c, d, count, seed, out } => {
            let domain = match count {
                Some(count) => ScatterDomain::Random { count, seed },
                None => ScatterDomain::Exhaustive,
            };
            let r = jbound_scatter(k, norm_bound, domain, c, d)?;
            if let Some(path) = out {
                let mut w = csv::Writer::from_writer(File::create(&path)?);
                w.write_record(["norm_l2", "j_lsb", "bound", "violated"])?;
                for p in &r.points {
                    w.write_record([
                        p.norm_l2.to_string(),
                        p.j_lsb.to_string(),
                        p.bound.to_string(),
                        u8::from(p.violated).to_string(),
                    ])?;
                }
                w.flush()?;
                eprintln!("wrote {} points to {}", r.points.len(), path.display());
            }
            print_json(&serde_json::json!({
                "points": r.points.len(),
                "violations": r.violations,
                "max_ratio": r.max_ratio,
            }))?;
        }
        Command::DnPoints { k, n, out } => {
            let ctx = KBonacciContext::new(k)?;
            let points = dn_points(&ctx, n)?;
            let mut w = csv::Writer::from_writer(File::create(&out)?);
            let mut header: Vec<String> = (1..k).map(|i| format!("v{i}")).collect();
            header.push("J".into());
            w.write_record(&header)?;
            for (v, j) in &points {
                let mut row: Vec<String> = v.entries().iter().map(ToString::to_string).collect();
                row.push(j.to_string());
                w.write_record(&row)?;
            }
            w.flush()?;
            eprintln!("wrote {} points to {}", points.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Invariant(e)) => {
            eprintln!("invariant violated: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
