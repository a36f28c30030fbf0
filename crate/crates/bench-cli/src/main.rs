use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ipm_lp::{initial_point, solve_lp, LpOptions};
use ipm_nlp::{solve_nlp, NlpOptions};
use kkt::{assemble, DerivativeBundle, Formulation};
use sparse_core::{write_matrix_market, SparseMatrix};

use bench_cli::{builtin_instance, parse_mps, read_manifest, run_batch, sgm10, summary_table,
                BenchError, Family};

#[derive(Parser)]
#[command(name = "bench", about = "Interior-point solver benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverArgs {
    /// Convergence tolerance on the scaled KKT residuals.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Wall-time cap in seconds.
    #[arg(long, default_value_t = 900.0)]
    max_time: f64,
    /// KKT formulation: full, augmented, primal, or dual.
    #[arg(long)]
    formulation: Option<Formulation>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a linear program from an MPS file.
    SolveLp {
        file: PathBuf,
        #[command(flatten)]
        common: SolverArgs,
        /// Primal regularization magnitude.
        #[arg(long, default_value_t = 1e-8)]
        delta_p: f64,
        /// Dual regularization magnitude.
        #[arg(long, default_value_t = 1e-8)]
        delta_d: f64,
        /// Write the KKT matrix assembled at the initial point, in Matrix
        /// Market format, to this path.
        #[arg(long)]
        dump_kkt: Option<PathBuf>,
    },
    /// Solve a built-in scalable nonlinear program.
    SolveNlp {
        /// rosenbrock_chain, convex_qp_grid, or circle_packing.
        #[arg(long)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        common: SolverArgs,
        /// One log line per iteration on stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Solve every entry of a JSON manifest and write CSV/JSON records.
    Batch {
        manifest: PathBuf,
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
        /// Cap used for the summary's SGM10 aggregation.
        #[arg(long, default_value_t = 900.0)]
        max_time: f64,
    },
    /// Aggregate the time_s column of a records CSV into one SGM10 value.
    Sgm10 {
        records: PathBuf,
        #[arg(long, default_value_t = 900.0)]
        max_time: f64,
    },
}

fn clap_formulation(f: Option<Formulation>, default: Formulation) -> Formulation {
    f.unwrap_or(default)
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::SolveLp {
            file,
            common,
            delta_p,
            delta_d,
            dump_kkt,
        } => {
            let parsed = parse_mps(&fs::read_to_string(&file)?)?;
            for w in &parsed.warnings {
                eprintln!("warning: {w}");
            }
            let opts = LpOptions {
                tol: common.tol,
                max_iter: common.max_iter,
                max_wall_time: common.max_time,
                formulation: clap_formulation(common.formulation, Formulation::DualCondensed),
                delta_p,
                delta_d,
            };
            if let Some(path) = dump_kkt {
                let n = parsed.lp.n();
                let mut state = initial_point(&parsed.lp)?;
                state.delta_p = delta_p;
                state.delta_d = delta_d;
                let bundle = DerivativeBundle {
                    grad: parsed.lp.c.clone(),
                    constraints: parsed.lp.constraints(&state.x),
                    jacobian: parsed.lp.a.clone(),
                    hessian: SparseMatrix::empty(n, n),
                };
                let ws = assemble(opts.formulation, &bundle, &state)?;
                write_matrix_market(ws.matrix(), fs::File::create(path)?)?;
            }
            let report = solve_lp(&parsed.lp, &opts)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::SolveNlp {
            family,
            size,
            common,
            verbose,
        } => {
            let model = builtin_instance(family, size)?;
            let opts = NlpOptions {
                tol: common.tol,
                max_iter: common.max_iter,
                max_wall_time: common.max_time,
                formulation: clap_formulation(common.formulation, Formulation::PrimalCondensed),
                verbose,
                ..NlpOptions::default()
            };
            let report = solve_nlp(&model, &opts)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Batch {
            manifest,
            out,
            max_time,
        } => {
            let entries = read_manifest(&manifest)?;
            let records = run_batch(&entries, &out)?;
            print!("{}", summary_table(&records, max_time));
        }
        Command::Sgm10 { records, max_time } => {
            let text = fs::read_to_string(&records)?;
            let mut times = Vec::new();
            for (lineno, line) in text.lines().enumerate().skip(1) {
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split(',').collect();
                let t = fields.get(3).ok_or_else(|| BenchError::Parse {
                    line: lineno + 1,
                    message: "missing time_s column".into(),
                })?;
                times.push(t.parse::<f64>().map_err(|_| BenchError::Parse {
                    line: lineno + 1,
                    message: format!("bad time_s value `{t}`"),
                })?);
            }
            println!("{}", sgm10(&times, max_time)?);
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
