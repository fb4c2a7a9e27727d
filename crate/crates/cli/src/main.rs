use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tnare_cli::{generate, parse_region, run_benchmark, run_solver, write_solve, BenchConfig, Example};
use tnare_core::{Method, Result, SolverOptions};

#[derive(Parser)]
#[command(name = "tnare", version, about = "Dense solvers for DX + X^T A - X^T B X + C = 0")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ProblemArgs {
    /// ex1, ex2, ex3 or ex4.
    #[arg(long, default_value = "ex1")]
    example: Example,
    /// Problem size; comma-separated list for `bench`.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    n: Vec<usize>,
    /// Distance parameter of ex4.
    #[arg(long, default_value_t = 1e-10)]
    sigma: f64,
    /// Generator seed of ex2.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write A, B, C, D of a test problem.
    Gen {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one problem and print the report.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Read A.txt .. D.txt from this directory instead of generating.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "da")]
        solver: Method,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        maxit: usize,
        /// inside, outside or none (PQZ without reordering).
        #[arg(long, default_value = "inside")]
        region: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare solvers and write tables.
    Bench {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Comma-separated subset of qz,da,pqz,newton,fixedpoint.
        #[arg(long, value_delimiter = ',', default_value = "qz,da,pqz,newton,fixedpoint")]
        solver: Vec<Method>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        maxit: usize,
        /// Decimal digits of the ex4 reference solution.
        #[arg(long, default_value_t = 100)]
        digits: usize,
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
    },
}

fn single_n(p: &ProblemArgs) -> usize {
    p.n.first().copied().unwrap_or(10)
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen { problem, out } => {
            generate(problem.example, single_n(&problem), problem.sigma, problem.seed)?.save_dir(&out)?;
            println!("wrote {}", out.display());
        }
        Cmd::Solve { problem, input, solver, tol, maxit, region, out } => {
            let p = match input {
                Some(dir) => tnare_core::TRiccatiProblem::load_dir(dir)?,
                None => generate(problem.example, single_n(&problem), problem.sigma, problem.seed)?,
            };
            let opts = SolverOptions { tol, maxit, ..SolverOptions::default() };
            let r = run_solver(&p, solver, parse_region(&region)?, &opts)?;
            print!("{}", r.to_key_value());
            if let Some(dir) = out {
                write_solve(&dir, &r)?;
            }
        }
        Cmd::Bench { problem, solver, tol, maxit, digits, out } => {
            let cfg = BenchConfig {
                example: problem.example,
                sizes: problem.n,
                sigma: problem.sigma,
                seed: problem.seed,
                solvers: solver,
                tol,
                maxit,
                digits,
                out,
            };
            let summary = run_benchmark(&cfg)?;
            let failed = summary.cells.iter().filter(|c| c.outcome.is_err()).count();
            for f in &summary.files {
                if f.parent() == Some(cfg.out.as_path()) && f.extension().is_some_and(|e| e == "txt") {
                    println!("{}", std::fs::read_to_string(f)?);
                }
            }
            println!("{} cells, {failed} failed, {} files under {}", summary.cells.len(), summary.files.len(), cfg.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
