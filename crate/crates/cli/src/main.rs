use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kakeya_cli::{run, Command, Format, Options};

#[derive(Parser)]
#[command(
    name = "kakeya",
    version,
    about = "Multilinear Kakeya overlap evaluation and bound certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Input JSON document.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads. Results do not depend on it.
    #[arg(long, global = true, env = "KAKEYA_THREADS")]
    threads: Option<usize>,
    /// Fixed cells per side (no refinement).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Relative tolerance of grid refinement.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Largest number of quadrature cells allowed.
    #[arg(long, global = true)]
    cell_budget: Option<u64>,
    #[arg(long, global = true)]
    max_doublings: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a configuration from a generator spec.
    Gen,
    /// Quadrature value of the overlap functional.
    Eval,
    /// Exact planar value by polygon clipping.
    Exact2d,
    /// Multiscale certificate.
    Certify {
        /// Also evaluate the functional and fail with exit 2 if it exceeds the bound.
        #[arg(long)]
        check: bool,
    },
    /// Loomis-Whitney check on grid functions.
    VerifyLw,
    /// One step of the scale induction on a cube of side 1/delta.
    VerifyStep,
    /// Split a general configuration into small-angle problems and certify them.
    Reduce {
        /// Transversality lower bound; switches to the transversal reduction.
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        check: bool,
    },
    /// Scale sweep with a fitted log-log slope.
    Sweep,
    /// Multi-start search for configurations with large overlap ratio.
    Search,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let (command, check, nu) = match cli.command {
        Cmd::Gen => (Command::Gen, false, None),
        Cmd::Eval => (Command::Eval, false, None),
        Cmd::Exact2d => (Command::Exact2d, false, None),
        Cmd::Certify { check } => (Command::Certify, check, None),
        Cmd::VerifyLw => (Command::VerifyLw, false, None),
        Cmd::VerifyStep => (Command::VerifyStep, false, None),
        Cmd::Reduce { nu, check } => (Command::Reduce, check, nu),
        Cmd::Sweep => (Command::Sweep, false, None),
        Cmd::Search => (Command::Search, false, None),
    };
    let opts = Options {
        config: cli.config,
        seed: cli.seed,
        grid: cli.grid,
        tol: cli.tol,
        epsilon: cli.epsilon,
        delta: cli.delta,
        nu,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
        cell_budget: cli.cell_budget,
        max_doublings: cli.max_doublings,
        check,
    };
    let outcome = match run(command, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.body.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match &outcome.status {
        kakeya_cli::Status::Ok => {}
        kakeya_cli::Status::Violation(m) => eprintln!("property violation: {m}"),
        kakeya_cli::Status::NotConverged(m) => eprintln!("not converged: {m}"),
    }
    ExitCode::from(outcome.status.exit_code())
}
