use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parmat::demos::OdeConfig;
use parmat::Method;
use parmat_cli::{
    converge, format_table, run_demo_2x2, run_demo_ode, solve_file, CliResult, ConvergeArgs, Outputs, SolveArgs,
};

/// Spectral approximation of parameterized linear systems A(s) x(s) = b(s).
#[derive(Parser)]
#[command(name = "parmat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file with one method at one truncation order.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// pseudospectral or galerkin
        #[arg(long, default_value = "galerkin")]
        method: Method,
        #[arg(long)]
        n: usize,
        /// Force quadrature assembly of the Galerkin system with this many points.
        #[arg(long)]
        quad_order: Option<usize>,
        /// Also write the solution at this many equally spaced points.
        #[arg(long)]
        sample_points: Option<usize>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// The 2x2 example with poles at ±√(1 + eps).
    Demo2x2 {
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// The parameterized boundary value problem on s ∈ [eps, 1].
    DemoOde {
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 64)]
        elements: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        /// Gauss points for Galerkin assembly (default 2n + 10).
        #[arg(long)]
        quad_order: Option<usize>,
        /// Also solve with A(s) replaced by its degree-d interpolant.
        #[arg(long)]
        poly_degree: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Residual norms of both methods over a range of n for a problem file.
    Converge {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        quad_order: Option<usize>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

fn finish(outputs: &Outputs, dir: Option<&PathBuf>) -> CliResult<()> {
    if let Some(dir) = dir {
        outputs.write_to(dir)?;
        for name in outputs.names() {
            println!("wrote {}", dir.join(name).display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve {
            input,
            method,
            n,
            quad_order,
            sample_points,
            out_dir,
        } => {
            let outcome = solve_file(&SolveArgs {
                input,
                method,
                n,
                quad_order,
                sample_points,
            })?;
            println!(
                "residual_l2 = {:.6e}",
                outcome.manifest["residual_l2"].as_f64().unwrap_or(f64::NAN)
            );
            finish(&outcome.outputs, Some(&out_dir))
        }
        Command::Demo2x2 { eps, n_max, out_dir } => {
            let (report, outputs) = run_demo_2x2(eps, n_max)?;
            print!("{}", format_table(&[&report.record]));
            match report.error_fit {
                Some(fit) => println!(
                    "fitted rate {:.4} (R² {:.4}), predicted {:.4}",
                    fit.rate, fit.r_squared, report.predicted_rate
                ),
                None => println!("too few points above round-off to fit a rate"),
            }
            println!("max |X_g - X_p| = {:.2e}", report.galerkin_max_diff);
            finish(&outputs, out_dir.as_ref())
        }
        Command::DemoOde {
            eps,
            elements,
            n_max,
            quad_order,
            poly_degree,
            out_dir,
        } => {
            let (report, outputs) = run_demo_ode(OdeConfig {
                eps,
                n_elements: elements,
                n_max,
                quad_order,
                poly_degree,
            })?;
            let mut records = vec![&report.galerkin, &report.pseudospectral];
            records.extend(report.truncated.as_ref());
            print!("{}", format_table(&records));
            for (name, fit) in [
                ("galerkin", report.galerkin_fit),
                ("pseudospectral", report.pseudospectral_fit),
            ] {
                if let Some(fit) = fit {
                    println!("{name}: fitted rate {:.4} (R² {:.4})", fit.rate, fit.r_squared);
                }
            }
            finish(&outputs, out_dir.as_ref())
        }
        Command::Converge {
            input,
            n_min,
            n_max,
            quad_order,
            out_dir,
        } => {
            let (records, outputs) = converge(&ConvergeArgs {
                input,
                n_min,
                n_max,
                quad_order,
            })?;
            print!("{}", format_table(&records.iter().collect::<Vec<_>>()));
            finish(&outputs, Some(&out_dir))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
