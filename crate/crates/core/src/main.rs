use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stokes_asgs::cli::{RunConfig, cmd_solve, cmd_study};

#[derive(Parser)]
#[command(
    name = "stokes-asgs",
    version,
    about = "Stabilized transient Stokes solver on the unit square"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case and write per-step errors as CSV.
    Solve(CommonArgs),
    /// Run a refinement study and write the convergence table as CSV.
    Study {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of refinement levels.
        #[arg(long, default_value_t = 5)]
        levels: usize,
        /// Refine dt only, keeping the mesh fixed.
        #[arg(long)]
        time_study: bool,
    },
}

/// Flags override values read from `--config`.
#[derive(Args)]
struct CommonArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// 1 for backward Euler, 0 for Crank-Nicolson.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Plain Galerkin (no stabilization terms).
    #[arg(long)]
    no_stab: bool,
    /// direct or gmres.
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    gmres_tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(&self) -> stokes_asgs::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.nx {
            c.nx = v;
        }
        if let Some(v) = self.dt {
            c.dt = v;
        }
        if let Some(v) = &self.theta {
            c.set("theta", v)?;
        }
        if let Some(v) = self.t_final {
            c.t_final = v;
        }
        if let Some(v) = self.mu {
            c.mu = v;
        }
        if let Some(v) = self.c1 {
            c.c1 = v;
        }
        if let Some(v) = self.c2 {
            c.c2 = v;
        }
        if self.no_stab {
            c.stabilized = false;
        }
        if let Some(v) = &self.solver {
            c.set("solver", v)?;
        }
        if let Some(v) = self.gmres_tol {
            c.gmres_tol = v;
        }
        if let Some(v) = &self.out {
            c.output = Some(v.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

fn writer(config: &RunConfig) -> stokes_asgs::Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> stokes_asgs::Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let config = args.resolve()?;
            let mut out = writer(&config)?;
            cmd_solve(&config, &mut out)?;
            out.flush()?;
        }
        Command::Study {
            common,
            levels,
            time_study,
        } => {
            let config = common.resolve()?;
            let mut out = writer(&config)?;
            cmd_study(&config, levels, time_study, &mut out)?;
            out.flush()?;
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
