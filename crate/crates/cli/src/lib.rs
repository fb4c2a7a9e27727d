//! Problem generation and the solver comparison sweep behind the `tnare`
//! binary.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use tnare_core::gallery::{gen_example1, gen_example2, gen_example3, gen_example4};
use tnare_core::multiprec::{bits_for_digits, example4_linearization, mp_da_solve, MpProblem};
use tnare_core::riccati::{relative_distance, solve_da, solve_fixed_point, solve_newton, solve_pqz, solve_qz};
use tnare_core::{DenseMatrix, Eig, Method, Region, Result, SolveReport, SolverOptions, TRiccatiProblem, TnareError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Example::Ex1 => "ex1",
            Example::Ex2 => "ex2",
            Example::Ex3 => "ex3",
            Example::Ex4 => "ex4",
        })
    }
}

impl FromStr for Example {
    type Err = TnareError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" | "1" => Ok(Example::Ex1),
            "ex2" | "2" => Ok(Example::Ex2),
            "ex3" | "3" => Ok(Example::Ex3),
            "ex4" | "4" => Ok(Example::Ex4),
            _ => Err(TnareError::InvalidConfig(format!("unknown example `{s}`"))),
        }
    }
}

/// `inside`, `outside` or `none` (no reordering, PQZ only).
pub fn parse_region(s: &str) -> Result<Option<Region>> {
    match s.to_ascii_lowercase().as_str() {
        "inside" | "in" => Ok(Some(Region::Inside)),
        "outside" | "out" => Ok(Some(Region::Outside)),
        "none" => Ok(None),
        _ => Err(TnareError::InvalidConfig(format!("unknown region `{s}`"))),
    }
}

pub fn generate(example: Example, n: usize, sigma: f64, seed: u64) -> Result<TRiccatiProblem> {
    match example {
        Example::Ex1 => gen_example1(n),
        Example::Ex2 => gen_example2(n, seed),
        Example::Ex3 if n == 2 => Ok(gen_example3()),
        Example::Ex3 => Err(TnareError::InvalidConfig("ex3 has n = 2".into())),
        Example::Ex4 => gen_example4(n, sigma),
    }
}

/// Runs one solver. `region` applies to QZ and PQZ; QZ treats `None` as
/// inside.
pub fn run_solver(p: &TRiccatiProblem, method: Method, region: Option<Region>, opts: &SolverOptions) -> Result<SolveReport> {
    let n = p.n();
    match method {
        Method::Qz => solve_qz(p, region.unwrap_or(Region::Inside), opts),
        Method::Pqz => solve_pqz(p, region, opts),
        Method::Da => solve_da(p, opts).map(|r| r.0),
        Method::Newton => {
            let o = SolverOptions { maxit: opts.maxit.min(SolverOptions::newton().maxit), ..opts.clone() };
            solve_newton(p, &DenseMatrix::zeros(n, n), &o)
        }
        Method::FixedPoint => solve_fixed_point(p, opts),
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub example: Example,
    pub sizes: Vec<usize>,
    /// Only used by ex4.
    pub sigma: f64,
    /// Only used by ex2.
    pub seed: u64,
    pub solvers: Vec<Method>,
    pub tol: f64,
    pub maxit: usize,
    /// Decimal digits of the ex4 reference.
    pub digits: usize,
    pub out: PathBuf,
}

impl BenchConfig {
    pub fn new(example: Example, sizes: Vec<usize>, out: impl Into<PathBuf>) -> Self {
        BenchConfig {
            example,
            sizes,
            sigma: 1e-10,
            seed: 1,
            solvers: Method::ALL.to_vec(),
            tol: 1e-12,
            maxit: 100,
            digits: 100,
            out: out.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(TnareError::InvalidConfig("sizes must be positive".into()));
        }
        if self.example == Example::Ex4 && !(self.sigma > 0.0) {
            return Err(TnareError::InvalidConfig("sigma must be positive".into()));
        }
        if self.solvers.is_empty() {
            return Err(TnareError::InvalidConfig("no solvers selected".into()));
        }
        if !(self.tol > 0.0) || self.maxit == 0 {
            return Err(TnareError::InvalidConfig("tol and maxit must be positive".into()));
        }
        Ok(())
    }

    fn options(&self) -> SolverOptions {
        SolverOptions { tol: self.tol, maxit: self.maxit, ..SolverOptions::default() }
    }
}

/// One (example, n, solver) result.
#[derive(Debug, Clone)]
pub struct Cell {
    pub example: Example,
    pub n: usize,
    /// Solver tag, with a suffix for the extra ex3 solutions.
    pub label: String,
    pub outcome: std::result::Result<SolveReport, TnareError>,
    /// Median wall time of 3 runs.
    pub seconds: f64,
    pub dist_newton: Option<f64>,
    pub forward_error: Option<f64>,
}

impl Cell {
    pub fn status(&self) -> String {
        match &self.outcome {
            Ok(_) => "ok".into(),
            Err(e) => format!("error: {e}"),
        }
    }
}

#[derive(Debug)]
pub struct BenchSummary {
    pub cells: Vec<Cell>,
    pub files: Vec<PathBuf>,
}

fn timed(p: &TRiccatiProblem, method: Method, region: Option<Region>, opts: &SolverOptions) -> (Result<SolveReport>, f64) {
    let mut times = Vec::with_capacity(3);
    let mut first = None;
    for _ in 0..3 {
        let t = Instant::now();
        let r = run_solver(p, method, region, opts);
        times.push(t.elapsed().as_secs_f64());
        let failed = r.is_err();
        first.get_or_insert(r);
        if failed {
            break;
        }
    }
    times.sort_by(f64::total_cmp);
    (first.unwrap(), times[times.len() / 2])
}

fn reference(cfg: &BenchConfig, n: usize) -> Result<DenseMatrix> {
    let prec = bits_for_digits(cfg.digits);
    let p = MpProblem::from_linearization(&example4_linearization(n, cfg.sigma, prec));
    let tol = 10f64.powi(-(cfg.digits as i32 - 10).max(1));
    Ok(mp_da_solve(&p, tol, cfg.maxit.max(200))?.x.to_f64())
}

/// Solves every selected cell and writes the tables under `cfg.out`.
/// Solver failures are recorded per cell.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchSummary> {
    cfg.validate()?;
    let opts = cfg.options();
    let mut cells = Vec::new();
    for &n in &cfg.sizes {
        let p = generate(cfg.example, n, cfg.sigma, cfg.seed)?;
        let mut runs: Vec<(String, Method, Option<Region>)> =
            cfg.solvers.iter().map(|&m| (m.tag().to_string(), m, Some(Region::Inside))).collect();
        if cfg.example == Example::Ex3 {
            if cfg.solvers.contains(&Method::Pqz) {
                runs.push(("pqz-none".into(), Method::Pqz, None));
                runs.push(("pqz-outside".into(), Method::Pqz, Some(Region::Outside)));
            }
            if cfg.solvers.contains(&Method::Qz) {
                runs.push(("qz-outside".into(), Method::Qz, Some(Region::Outside)));
            }
        }
        let xref = match cfg.example {
            Example::Ex4 => Some(reference(cfg, n)),
            _ => None,
        };
        let mut row: Vec<Cell> = runs
            .into_iter()
            .map(|(label, m, region)| {
                let (outcome, seconds) = timed(&p, m, region, &opts);
                Cell { example: cfg.example, n, label, outcome, seconds, dist_newton: None, forward_error: None }
            })
            .collect();
        let newton = row.iter().find(|c| c.label == "newton").and_then(|c| c.outcome.as_ref().ok()).map(|r| r.x.clone());
        for c in &mut row {
            if let Ok(r) = &c.outcome {
                c.dist_newton = newton.as_ref().map(|x| relative_distance(&r.x, x));
                if let Some(Ok(x)) = &xref {
                    c.forward_error = Some(relative_distance(&r.x, x));
                }
            }
        }
        cells.extend(row);
    }
    let files = write_reports(cfg, &cells)?;
    Ok(BenchSummary { cells, files })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3e}")).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> TnareError {
    TnareError::Io(e.to_string())
}

pub const RESIDUAL_HEADER: [&str; 8] = ["example", "n", "solver", "rel_residual", "rel_dist_newton", "iterations", "seconds", "status"];

pub fn residual_csv(cells: &[Cell]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESIDUAL_HEADER).map_err(csv_err)?;
    for c in cells {
        let (res, it) = match &c.outcome {
            Ok(r) => (format!("{:.3e}", r.relative_residual), r.iterations.to_string()),
            Err(_) => (String::new(), String::new()),
        };
        w.write_record([
            c.example.to_string(),
            c.n.to_string(),
            c.label.clone(),
            res,
            fmt_opt(c.dist_newton),
            it,
            format!("{:.6}", c.seconds),
            c.status(),
        ])
        .map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| TnareError::Io(e.to_string()))?).map_err(|e| TnareError::Io(e.to_string()))
}

/// Rows are sizes, columns solver labels.
pub fn aligned_table(cells: &[Cell], title: &str, value: impl Fn(&Cell) -> String) -> String {
    let mut labels: Vec<&str> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for c in cells {
        if !labels.contains(&c.label.as_str()) {
            labels.push(&c.label);
        }
        if !sizes.contains(&c.n) {
            sizes.push(c.n);
        }
    }
    let mut grid = vec![std::iter::once("n".to_string()).chain(labels.iter().map(|s| s.to_string())).collect::<Vec<_>>()];
    for &n in &sizes {
        let mut row = vec![n.to_string()];
        for l in &labels {
            row.push(cells.iter().find(|c| c.n == n && c.label == *l).map(&value).unwrap_or_else(|| "-".into()));
        }
        grid.push(row);
    }
    let widths: Vec<usize> = (0..grid[0].len()).map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    let mut out = format!("{title}\n");
    for r in &grid {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn failed_label(c: &Cell) -> String {
    match &c.outcome {
        Err(TnareError::MaxIterations { .. }) => "maxit".into(),
        Err(TnareError::UnitCircleEigenvalue { .. }) | Err(TnareError::UnitCircleAmbiguity { .. }) => "unit-circle".into(),
        Err(TnareError::GraphConditionFailed { .. }) => "no-graph".into(),
        Err(_) => "failed".into(),
        Ok(_) => String::new(),
    }
}

/// `re,im` lines of the eigenvalues; infinite ones as `inf,0`.
pub fn eig_dump(eigs: &[Eig]) -> String {
    let mut s = String::new();
    for e in eigs {
        match e.lambda() {
            Some(l) => {
                let _ = writeln!(s, "{:e},{:e}", l.re, l.im);
            }
            None => s.push_str("inf,0\n"),
        }
    }
    s
}

fn write(path: PathBuf, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, text)?;
    files.push(path);
    Ok(())
}

fn write_reports(cfg: &BenchConfig, cells: &[Cell]) -> Result<Vec<PathBuf>> {
    let out = &cfg.out;
    fs::create_dir_all(out.join("eigs"))?;
    let ex = cfg.example;
    let mut files = Vec::new();
    write(out.join(format!("{ex}_residuals.csv")), &residual_csv(cells)?, &mut files)?;
    let res = aligned_table(cells, "relative residual", |c| match &c.outcome {
        Ok(r) => format!("{:.2e}", r.relative_residual),
        Err(_) => failed_label(c),
    });
    write(out.join(format!("{ex}_residuals.txt")), &res, &mut files)?;
    let dist = aligned_table(cells, "relative distance to newton", |c| match &c.outcome {
        Ok(_) => c.dist_newton.map(|d| format!("{d:.2e}")).unwrap_or_else(|| "-".into()),
        Err(_) => failed_label(c),
    });
    write(out.join(format!("{ex}_distance.txt")), &dist, &mut files)?;
    let timing = aligned_table(cells, "seconds [iterations]", |c| match &c.outcome {
        Ok(r) => format!("{:.3e} [{}]", c.seconds, r.iterations),
        Err(_) => failed_label(c),
    });
    write(out.join(format!("{ex}_timing.txt")), &timing, &mut files)?;
    if ex == Example::Ex4 {
        let fe = aligned_table(cells, "relative forward error", |c| match &c.outcome {
            Ok(_) => c.forward_error.map(|d| format!("{d:.2e}")).unwrap_or_else(|| "no-reference".into()),
            Err(_) => failed_label(c),
        });
        write(out.join("ex4_forward_error.txt"), &fe, &mut files)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["example", "n", "solver", "forward_error", "status"]).map_err(csv_err)?;
        for c in cells {
            w.write_record([ex.to_string(), c.n.to_string(), c.label.clone(), fmt_opt(c.forward_error), c.status()])
                .map_err(csv_err)?;
        }
        let text = String::from_utf8(w.into_inner().map_err(|e| TnareError::Io(e.to_string()))?).unwrap_or_default();
        write(out.join("ex4_forward_error.csv"), &text, &mut files)?;
    }
    for c in cells {
        if let Ok(r) = &c.outcome {
            let path = out.join("eigs").join(format!("{ex}_n{}_{}.txt", c.n, c.label));
            write(path, &eig_dump(&r.alpha_eigs), &mut files)?;
        }
    }
    if ex == Example::Ex3 {
        write(out.join("ex3_solutions.txt"), &ex3_records(cells), &mut files)?;
    }
    Ok(files)
}

/// The three distinct ex3 solutions and the eigenvalues of their `alpha`
/// pencils.
fn ex3_records(cells: &[Cell]) -> String {
    let mut s = String::new();
    for (name, label) in [("x_out", "pqz-none"), ("x_in", "pqz-outside"), ("x_newton", "newton")] {
        let Some(Ok(r)) = cells.iter().find(|c| c.label == label).map(|c| &c.outcome) else {
            continue;
        };
        let _ = writeln!(s, "[{name}] solver={label} rel_residual={:.3e}", r.relative_residual);
        s.push_str(&tnare_core::io::to_text(&r.x));
        let eigs: Vec<String> = r
            .alpha_eigs
            .iter()
            .filter_map(|e| e.lambda())
            .map(|l| format!("{:.6}{:+.6}i", l.re, l.im))
            .collect();
        let _ = writeln!(s, "alpha eigenvalues: {}\n", eigs.join(" "));
    }
    s
}

/// Writes `x.txt`, `report.txt` and `eigs.txt` for a single solve.
pub fn write_solve(dir: &Path, r: &SolveReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    tnare_core::io::write_text(dir.join("x.txt"), &r.x)?;
    fs::write(dir.join("report.txt"), r.to_key_value())?;
    fs::write(dir.join("eigs.txt"), eig_dump(&r.alpha_eigs))?;
    Ok(())
}
