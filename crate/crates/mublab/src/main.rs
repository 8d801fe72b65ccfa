use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mublab::cli::{self, Command as Cmd, GlobalOpts};

/// Numerical laboratory for propagator kernels and mutual-unbiasedness
/// diagnostics.
#[derive(Parser)]
#[command(name = "mublab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON, see schemas/run_config.schema.json).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized commands; overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Central window fraction; overrides the config window.
    #[arg(long, global = true)]
    window: Option<f64>,
    /// Tolerance for matrix checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel moduli and phases over the central window (CSV).
    Kernel,
    /// Flatness-deficit sweep over the configured times (CSV).
    DeficitSweep,
    /// Both sides of the kernel rescaling identity at one point (JSON).
    #[command(allow_negative_numbers = true)]
    ScalingCheck {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        t: f64,
    },
    /// Unitarity/unimodularity/deficit report for a JSON matrix.
    MubCheck {
        /// Matrix file: { "dim": M, "re": [[..]], "im": [[..]] }.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Inner product through a chain of seeded random bases (JSON).
    Insertion {
        #[arg(long)]
        dim: usize,
        /// Number of inserted bases.
        #[arg(long, default_value_t = 5)]
        bases: usize,
    },
    /// Integrate the quadratic-phase coefficient equations (CSV).
    #[command(allow_negative_numbers = true)]
    Riccati {
        #[arg(long)]
        k1: f64,
        #[arg(long)]
        k2: f64,
        #[arg(long)]
        k3: f64,
        /// Source point anchoring the initial conditions.
        #[arg(long, default_value_t = 0.0)]
        source: f64,
        #[arg(long, default_value_t = 1e-3)]
        t0: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// Per-mode field transition phase for a JSON field configuration (CSV).
    FieldPhase {
        /// Starting configuration alpha.
        #[arg(long)]
        field: PathBuf,
        /// Target configuration beta; the zero configuration when omitted.
        #[arg(long)]
        field_to: Option<PathBuf>,
        #[arg(long)]
        t: f64,
    },
    /// Rescale the scalar-field lagrangian 4-form (JSON).
    #[command(name = "rescale-4form", allow_negative_numbers = true)]
    Rescale4Form {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 0.5)]
        grad_coeff: f64,
        #[arg(long, default_value_t = 0.5)]
        mass_coeff: f64,
        /// Potential as inline JSON, e.g. '{"type":"polynomial","coeffs":[0,0,0,0,1]}'.
        #[arg(long)]
        potential: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = GlobalOpts {
        config: cli.config,
        output: cli.output,
        seed: cli.seed,
        window: cli.window,
        tol: cli.tol,
    };
    let command = match cli.command {
        Command::Kernel => Cmd::Kernel,
        Command::DeficitSweep => Cmd::DeficitSweep,
        Command::ScalingCheck { x, y, t } => Cmd::ScalingCheck { x, y, t },
        Command::MubCheck { matrix } => Cmd::MubCheck { matrix },
        Command::Insertion { dim, bases } => Cmd::Insertion { dim, bases },
        Command::Riccati {
            k1,
            k2,
            k3,
            source,
            t0,
            t_end,
            steps,
        } => Cmd::Riccati {
            k1,
            k2,
            k3,
            source,
            t0,
            t_end,
            steps,
        },
        Command::FieldPhase { field, field_to, t } => Cmd::FieldPhase { field, field_to, t },
        Command::Rescale4Form {
            s,
            grad_coeff,
            mass_coeff,
            potential,
        } => Cmd::Rescale4Form {
            s,
            grad_coeff,
            mass_coeff,
            potential,
        },
    };
    ExitCode::from(cli::execute(command, opts) as u8)
}
