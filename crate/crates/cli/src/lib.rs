//! Commands behind the `parmat` binary.
//!
//! Every command computes first and writes afterwards, so a failure never
//! leaves partial output behind. JSON outputs are deterministic; wall-clock
//! timings go to a separate `timings.json`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use parmat::analysis::{convergence_study, default_quad_order, residual_l2, ConvergenceRecord, FORMAT_VERSION};
use parmat::demos::{demo_2x2, demo_ode, OdeConfig, OdeReport, TwoByTwoReport};
use parmat::galerkin::{galerkin_solve, AssemblyRoute, GalerkinOptions};
use parmat::problem::{parse_problem, Problem};
use parmat::pseudospectral::{collocate, pseudospectral_solve};
use parmat::{Method, SpectralSolution};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] parmat::Error),
}

impl CliError {
    /// 2 for bad input, 1 for numerical or output failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Usage(_) => 2,
            CliError::Solver(e) if e.is_input() => 2,
            CliError::Write { .. } | CliError::Solver(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Files to be written once all computation has succeeded.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    fn add(&mut self, name: &str, contents: String) {
        self.files.push((PathBuf::from(name), contents));
    }

    fn add_json(&mut self, name: &str, value: &serde_json::Value) {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        self.add(name, text);
    }

    fn add_record(&mut self, stem: &str, record: &ConvergenceRecord) -> CliResult<()> {
        let mut csv = Vec::new();
        record.write_csv(&mut csv)?;
        self.add(&format!("{stem}.csv"), String::from_utf8(csv).expect("CSV is UTF-8"));
        self.add_json(&format!("{stem}.json"), &record.to_json());
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &Path> {
        self.files.iter().map(|(p, _)| p.as_path())
    }

    pub fn write_to(&self, dir: &Path) -> CliResult<()> {
        let err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Write { path, source }
        };
        fs::create_dir_all(dir).map_err(err(dir))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(err(&path))?;
        }
        Ok(())
    }
}

fn read_problem(path: &Path) -> CliResult<Problem> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_problem(&text).map_err(|e| match e {
        parmat::Error::Input(msg) => parmat::Error::Input(format!("{}: {msg}", path.display())).into(),
        other => other.into(),
    })
}

fn coeff_rows(c: &DMatrix<f64>) -> Vec<Vec<f64>> {
    c.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// The coefficient file: `coeffs[i][k]` multiplies `π_k` in component `i`.
pub fn coefficients_json(y: &SpectralSolution) -> serde_json::Value {
    json!({
        "format_version": FORMAT_VERSION,
        "N": y.dim(),
        "n": y.n(),
        "basis": y.family(),
        "method": y.method(),
        "coeffs": coeff_rows(y.coeffs()),
    })
}

/// `s, x_0, …, x_{N-1}` at `count` equally spaced points of `[-1, 1]`.
pub fn samples_csv(y: &SpectralSolution, count: usize) -> String {
    let mut out = String::from("s");
    for i in 0..y.dim() {
        write!(out, ",x_{i}").unwrap();
    }
    out.push('\n');
    for k in 0..count {
        let s = if count == 1 {
            0.0
        } else {
            -1.0 + 2.0 * k as f64 / (count - 1) as f64
        };
        write!(out, "{s:e}").unwrap();
        for v in y.eval(s).iter() {
            write!(out, ",{v:e}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct SolveArgs {
    pub input: PathBuf,
    pub method: Method,
    pub n: usize,
    pub quad_order: Option<usize>,
    pub sample_points: Option<usize>,
}

#[derive(Debug)]
pub struct SolveOutcome {
    pub solution: SpectralSolution,
    pub manifest: serde_json::Value,
    pub outputs: Outputs,
}

/// Solve a problem file; writes `coefficients.json`, `manifest.json`,
/// `timings.json` and, when requested, `samples.csv`.
pub fn solve_file(args: &SolveArgs) -> CliResult<SolveOutcome> {
    let total = Instant::now();
    let problem = read_problem(&args.input)?;
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if args.quad_order.is_some() && args.method == Method::Pseudospectral {
        return Err(CliError::Usage("--quad-order applies only to --method galerkin".into()));
    }
    let (a, b, family) = (&problem.a, &problem.b, problem.family);

    let start = Instant::now();
    let (solution, diagnostics) = match args.method {
        Method::Pseudospectral => {
            let c = collocate(a, b, family, args.n)?;
            let diag = json!({
                "route": "collocation",
                "quad_order": args.n,
                "max_node_condition": c.max_condition(),
            });
            (c.to_spectral(), diag)
        }
        Method::Galerkin => {
            let g = galerkin_solve(
                a,
                b,
                family,
                args.n,
                GalerkinOptions {
                    quad_order: args.quad_order,
                },
            )?;
            let route = match g.route {
                AssemblyRoute::Quadrature(_) => "quadrature",
                AssemblyRoute::JacobiOperator(_) => "jacobi_operator",
            };
            let diag = json!({
                "route": route,
                "quad_order": g.route.order(),
                "condition_estimate": g.condition,
            });
            (g.solution, diag)
        }
    };
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;
    let q = default_quad_order(args.n, a, b);
    let residual = residual_l2(&solution, a, b, q)?;

    let manifest = json!({
        "format_version": FORMAT_VERSION,
        "command": "solve",
        "input": args.input.display().to_string(),
        "method": args.method,
        "basis": family,
        "N": a.dim(),
        "n": args.n,
        "diagnostics": diagnostics,
        "residual_l2": residual,
        "residual_quad_order": q,
    });
    let mut outputs = Outputs::default();
    outputs.add_json("coefficients.json", &coefficients_json(&solution));
    if let Some(count) = args.sample_points {
        outputs.add("samples.csv", samples_csv(&solution, count));
    }
    outputs.add_json("manifest.json", &manifest);
    outputs.add_json(
        "timings.json",
        &json!({ "solve_ms": solve_ms, "total_ms": total.elapsed().as_secs_f64() * 1e3 }),
    );
    Ok(SolveOutcome {
        solution,
        manifest,
        outputs,
    })
}

#[derive(Debug, Clone)]
pub struct ConvergeArgs {
    pub input: PathBuf,
    pub n_min: usize,
    pub n_max: usize,
    pub quad_order: Option<usize>,
}

/// Both methods over `n_min..=n_max` for a problem file.
pub fn converge(args: &ConvergeArgs) -> CliResult<(Vec<ConvergenceRecord>, Outputs)> {
    let problem = read_problem(&args.input)?;
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(CliError::Usage("need 1 ≤ --n-min ≤ --n-max".into()));
    }
    let (a, b, family) = (&problem.a, &problem.b, problem.family);
    let ns = args.n_min..=args.n_max;
    let opts = GalerkinOptions {
        quad_order: args.quad_order,
    };
    let records = vec![
        convergence_study("pseudospectral", a, b, ns.clone(), None, None, |n| {
            pseudospectral_solve(a, b, family, n)
        })?,
        convergence_study("galerkin", a, b, ns, None, None, |n| {
            galerkin_solve(a, b, family, n, opts).map(|g| g.solution)
        })?,
    ];
    let mut outputs = Outputs::default();
    for r in &records {
        outputs.add_record(r.label(), r)?;
    }
    Ok((records, outputs))
}

fn fit_json<T: Serialize>(summary: &T) -> serde_json::Value {
    serde_json::to_value(summary).expect("summary serializes")
}

pub fn run_demo_2x2(eps: f64, n_max: usize) -> CliResult<(TwoByTwoReport, Outputs)> {
    let report = demo_2x2(eps, n_max)?;
    let mut outputs = Outputs::default();
    outputs.add_record("demo2x2", &report.record)?;
    outputs.add_json("summary.json", &fit_json(&report));
    Ok((report, outputs))
}

pub fn run_demo_ode(config: OdeConfig) -> CliResult<(OdeReport, Outputs)> {
    let report = demo_ode(config)?;
    let mut outputs = Outputs::default();
    outputs.add_record("galerkin", &report.galerkin)?;
    outputs.add_record("pseudospectral", &report.pseudospectral)?;
    if let Some(t) = &report.truncated {
        outputs.add_record(t.label(), t)?;
    }
    outputs.add_json("summary.json", &fit_json(&report));
    Ok((report, outputs))
}

/// Plain-text table of one or more records sharing the same `n` values.
pub fn format_table(records: &[&ConvergenceRecord]) -> String {
    let mut out = format!("{:>4}", "n");
    for r in records {
        write!(out, "  {:>22}", format!("{} residual", r.label())).unwrap();
        if r.entries().iter().any(|e| e.true_error_l2.is_some()) {
            write!(out, "  {:>22}", format!("{} error", r.label())).unwrap();
        }
    }
    out.push('\n');
    let rows = records.first().map_or(0, |r| r.entries().len());
    for i in 0..rows {
        write!(out, "{:>4}", records[0].entries()[i].n).unwrap();
        for r in records {
            let e = &r.entries()[i];
            write!(out, "  {:>22.6e}", e.residual_l2).unwrap();
            if let Some(err) = e.true_error_l2 {
                write!(out, "  {err:>22.6e}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}
