use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use sparsol::exec::with_threads;
use sparsol::{bounds, linalg, period, solver, sparsify, Error, Exec, Instance, Solution};

/// Sparse non-negative integer solutions: bounds, minimal supports,
/// support reduction and knapsack periodicity.
#[derive(Parser)]
#[command(name = "sparsol", version)]
struct Cli {
    /// Worker threads for sweeps; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparsity bounds for the instance.
    Bounds { instance: PathBuf },
    /// Minimal support size and a witness for one right-hand side.
    M0 {
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// CSV of m0(b) for b = 0..=max (knapsacks only).
    Sweep {
        instance: PathBuf,
        #[arg(long)]
        max: i64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Periodicity report for a positive knapsack.
    Period {
        instance: PathBuf,
        #[arg(long, default_value_t = 120)]
        window: u64,
    },
    /// Frobenius data of the whole set, and of every subset with --subsets.
    Frobenius {
        instance: PathBuf,
        #[arg(long)]
        subsets: bool,
    },
    /// Reduce the support of a solution.
    #[command(group(ArgGroup::new("start").required(true).args(["solution", "find"])))]
    Sparsify {
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long)]
        solution: Option<String>,
        /// Start from the lexicographically smallest solution.
        #[arg(long)]
        find: bool,
    },
    /// m0(lambda b) for lambda = 1..=lambda_max.
    Dilate {
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long, default_value_t = 60)]
        lambda_max: u64,
    },
    /// Sum-distinctness and the sinc lower bound.
    Sumdistinct { instance: PathBuf },
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMember | Error::InvalidSolution(_) => Failure::Domain(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_vec<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',').map(|p| p.trim().parse().map_err(|_| Failure::Usage(format!("{what}: cannot parse {p:?}")))).collect()
}

fn emit<T: Serialize>(value: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    text.push('\n');
    write_stdout(&text)
}

fn write_stdout(text: &str) -> Outcome {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
        _ => Ok(()),
    }
}

fn sweep_csv(points: &[solver::SweepPoint]) -> String {
    let mut s = String::from("b,m0\n");
    for p in points {
        match p.m0 {
            Some(v) => s.push_str(&format!("{},{v}\n", p.at)),
            None => s.push_str(&format!("{},\n", p.at)),
        }
    }
    s
}

fn run(command: Command, exec: Exec) -> Outcome {
    match command {
        Command::Bounds { instance } => emit(&bounds::bounds_report(&load(&instance)?)?),
        Command::M0 { instance, rhs } => {
            let x = load(&instance)?;
            let b = parse_vec::<i64>(&rhs, "--rhs")?;
            match solver::min_support_solution(&x, &b)? {
                Some(sol) => emit(&json!({ "member": true, "m0": sol.support_size(), "witness": sol.coeffs })),
                None => {
                    emit(&json!({ "member": false, "m0": null, "witness": null }))?;
                    Err(Failure::Domain(format!("{rhs} is not in the semigroup")))
                }
            }
        }
        Command::Sweep { instance, max, out } => {
            let x = load(&instance)?;
            let csv = sweep_csv(&solver::m0_sweep_with(&x, max, exec)?.points);
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
                None => write_stdout(&csv),
            }
        }
        Command::Period { instance, window } => emit(&period::period_report_with(&load(&instance)?, window, exec)?),
        Command::Frobenius { instance, subsets } => {
            let x = load(&instance)?;
            let values = x.positive_knapsack()?;
            let mut report = json!({
                "whole": period::frobenius(&values)?,
                "N0": period::n0_threshold(&x)?,
            });
            if subsets {
                report["subsets"] =
                    serde_json::to_value(period::subset_frobenius(&x)?).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            emit(&report)
        }
        Command::Sparsify { instance, rhs, solution, find } => {
            let x = load(&instance)?;
            let b = parse_vec::<i64>(&rhs, "--rhs")?;
            let start = match solution {
                Some(s) => Solution::new(parse_vec::<u64>(&s, "--solution")?),
                None => {
                    debug_assert!(find);
                    solver::is_member(&x, &b)?
                        .ok_or_else(|| Failure::Domain(format!("{rhs} is not in the semigroup")))?
                }
            };
            let knapsack = x.dim() == 1 && x.positive_knapsack().is_ok();
            let (_, trace) = if knapsack {
                sparsify::knapsack_sparsify(&x, &b, &start)?
            } else {
                sparsify::sparsify(&x, &b, &start)?
            };
            emit(&json!({ "method": if knapsack { "knapsack" } else { "siegel" }, "trace": trace }))
        }
        Command::Dilate { instance, rhs, lambda_max } => {
            let x = load(&instance)?;
            let b = parse_vec::<i64>(&rhs, "--rhs")?;
            emit(&solver::dilation_sequence_with(&x, &b, lambda_max, exec)?)
        }
        Command::Sumdistinct { instance } => {
            let x = load(&instance)?;
            let check = bounds::sum_distinct_check(&x)?;
            let kernel = linalg::ternary_kernel(&x, None).map(|k| k.0);
            emit(&json!({
                "is_sum_distinct": check.is_sum_distinct,
                "lower_bound_ok": check.lower_bound_ok,
                "kernel": kernel,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let command = cli.command;
    let outcome = match with_threads(cli.threads, move |exec| run(command, exec)) {
        Ok(o) => o,
        Err(e) => Err(Failure::Usage(e)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
