//! `qaho` command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage, configuration or I/O errors,
//! 2 when a numerical routine fails.

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qaho::evolution::{EvolutionMethod, InitialState};
use qaho::model::Representation;

use config::{Format, RunConfig, VariationalSection};
use output::{write_all, Artifact};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[from] qaho::Error),
}

impl CliError {
    fn invalid(e: qaho::Error) -> Self {
        CliError::Config(e.to_string())
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qaho", version, about = "Quartic anharmonic oscillator on a simulated qubit register")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for sampling and optimizer initialization.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format of tabular artifacts.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy levels from VQD, perturbation theory, WKB and exact diagonalization.
    Spectrum(VariationalArgs),
    /// Time evolution trajectory with optional shot sampling.
    Evolve(EvolveArgs),
    /// VQD levels with fidelities against the exact eigenstates.
    Vqe(VariationalArgs),
    /// Two-dimensional potential surface on the position grid.
    Grid(GridArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RepArg {
    Fock,
    Position,
}

impl From<RepArg> for Representation {
    fn from(r: RepArg) -> Self {
        match r {
            RepArg::Fock => Representation::Fock,
            RepArg::Position => Representation::Position,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Split,
    Circuit,
}

impl From<MethodArg> for EvolutionMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => EvolutionMethod::ExactExponential,
            MethodArg::Split => EvolutionMethod::SplitProduct,
            MethodArg::Circuit => EvolutionMethod::Circuit,
        }
    }
}

#[derive(Args, Debug)]
struct HamiltonianArgs {
    /// Hilbert-space dimension (power of two).
    #[arg(long)]
    dim: Option<usize>,
    /// Quartic coupling.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum)]
    representation: Option<RepArg>,
}

#[derive(Args, Debug)]
struct VariationalArgs {
    #[command(flatten)]
    hamiltonian: HamiltonianArgs,
    /// Number of levels to find.
    #[arg(long)]
    levels: Option<usize>,
    /// Random initializations per level.
    #[arg(long)]
    restarts: Option<usize>,
    /// Objective evaluations per minimization.
    #[arg(long)]
    max_evals: Option<usize>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[command(flatten)]
    hamiltonian: HamiltonianArgs,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Shots per time point; 0 disables sampling.
    #[arg(long)]
    shots: Option<u64>,
    /// Initial computational basis state.
    #[arg(long)]
    initial: Option<usize>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
}

fn apply_hamiltonian(spec: &mut qaho::model::HamiltonianSpec, args: &HamiltonianArgs) {
    if let Some(d) = args.dim {
        spec.dim = d;
    }
    if let Some(l) = args.lambda {
        spec.lambda = l;
    }
    if let Some(r) = args.representation {
        spec.representation = r.into();
    }
}

fn apply_variational(section: &mut VariationalSection, args: &VariationalArgs) {
    apply_hamiltonian(&mut section.hamiltonian, &args.hamiltonian);
    if let Some(l) = args.levels {
        section.vqd.levels = l;
    }
    if let Some(r) = args.restarts {
        section.vqd.restarts = r;
    }
    if let Some(m) = args.max_evals {
        section.vqd.optimizer.max_evals = m;
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    match &cli.command {
        Command::Spectrum(a) => apply_variational(&mut cfg.spectrum, a),
        Command::Vqe(a) => apply_variational(&mut cfg.vqe, a),
        Command::Evolve(a) => {
            let e = &mut cfg.evolve;
            apply_hamiltonian(&mut e.spec, &a.hamiltonian);
            if let Some(t) = a.t_max {
                e.t_max = t;
            }
            if let Some(s) = a.steps {
                e.steps = s;
            }
            if let Some(m) = a.method {
                e.method = m.into();
            }
            if let Some(s) = a.shots {
                e.shots = (s > 0).then_some(s);
            }
            if let Some(k) = a.initial {
                e.initial = InitialState::Basis(k);
            }
        }
        Command::Grid(a) => {
            if let Some(d) = a.dim {
                cfg.grid.dim = d;
            }
            if let Some(l) = a.lambda {
                cfg.grid.lambda = l;
            }
        }
    }
    cfg.normalize();
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    let outcome = match &cli.command {
        Command::Spectrum(_) => commands::spectrum(&cfg.spectrum, cfg.format)?,
        Command::Evolve(_) => commands::evolve(&cfg.evolve, cfg.format)?,
        Command::Vqe(_) => commands::vqe(&cfg.vqe, cfg.format)?,
        Command::Grid(_) => commands::grid(&cfg.grid, cfg.format)?,
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let mut artifacts = outcome.artifacts;
    artifacts.push(Artifact {
        name: "run_config.json".into(),
        bytes: format!("{}\n", cfg.to_json()).into_bytes(),
    });
    write_all(&cfg.output_dir, &artifacts)?;
    for a in &artifacts {
        println!("{}", cfg.output_dir.join(&a.name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
