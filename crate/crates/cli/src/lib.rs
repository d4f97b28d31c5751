//! Command-line front end for the jackson-core library.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod output;
pub mod verify;

use clap::{Parser, Subcommand};
use commands::{EvalPath, EvalRequest, Outcome};
use config::{parse_complex, parse_grid, Format, GridSpec, RunConfig};
use error::CliError;
use jackson_core::Complex64;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "jackson",
    version,
    about = "Jackson q-calculus, q-difference equations and Nevanlinna sweeps"
)]
pub struct Cli {
    /// Base q as re+imi.
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    pub q: Option<Complex64>,
    /// Series truncation order.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Log-spaced radial grid rmin:rmax:points.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    /// Angular quadrature nodes per circle.
    #[arg(long, global = true, default_value_t = 1024)]
    pub nodes: usize,
    /// Tolerance override.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for the random fixtures of `verify`.
    #[arg(long, global = true, default_value_t = fixtures::DEFAULT_SEED)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate exp_q, etilde_q, E_q, sin_q, cos_q or phi_rs.
    Eval {
        function: String,
        /// Evaluation points, comma-separated re+imi values.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true, required = true)]
        z: Vec<Complex64>,
        #[arg(long, value_enum, default_value_t = EvalPath::Series)]
        path: EvalPath,
        /// Upper parameters of phi_rs.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Vec<Complex64>,
        /// Lower parameters of phi_rs.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
        beta: Vec<Complex64>,
    },
    /// Solve a q-difference equation given as a JSON problem file.
    Solve { problem: PathBuf },
    /// Estimate the logarithmic order of a model.
    Order { model: String },
    /// Sweep Nevanlinna functionals over the grid.
    Sample { model: String },
    /// Run a property suite, or "all".
    Verify { suite: String },
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            q: self.q,
            n: self.n,
            grid: self.grid,
            nodes: self.nodes,
            tol: self.tol,
            seed: self.seed,
            out: self.out.clone(),
            format: self.format,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = cli.config();
    cfg.validate()?;
    match &cli.command {
        Command::Eval {
            function,
            z,
            path,
            alpha,
            beta,
        } => commands::cmd_eval(
            &EvalRequest {
                function: function.clone(),
                points: z.clone(),
                path: *path,
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
            &cfg,
        ),
        Command::Solve { problem } => commands::cmd_solve(problem, &cfg),
        Command::Order { model } => commands::cmd_order(model, &cfg),
        Command::Sample { model } => commands::cmd_sample(model, &cfg),
        Command::Verify { suite } => commands::cmd_verify(suite, &cfg),
    }
}
