use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "phasematch", version, about = "Phase matching for generalized Grover search")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Read and print angles in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,

    /// Residual tolerance; each command has its own default.
    #[arg(long, global = true, env = "PHASEMATCH_TOL")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// β directly, or through the marked weight `a = sin²β`.
#[derive(Debug, Args)]
pub struct GeometryArgs {
    #[arg(long, allow_negative_numbers = true, required_unless_present = "weight", conflicts_with = "weight")]
    pub beta: Option<f64>,

    /// Marked weight a = sin²β of U|0⟩.
    #[arg(long)]
    pub weight: Option<f64>,
}

/// Initial state `sin θ₀|1⟩ + cos θ₀ e^{iδ}|2⟩`; defaults to `U|0⟩`.
#[derive(Debug, Args)]
pub struct InitArgs {
    /// Defaults to β.
    #[arg(long, allow_negative_numbers = true)]
    pub theta0: Option<f64>,

    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub delta: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the matching condition for φ at a given θ.
    Solve {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Rotation angles, best step and success probabilities.
    Plan {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        /// Solved from the matching condition when omitted.
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        /// Also emit P_j for j = 0..=J_MAX.
        #[arg(long, value_name = "J_MAX")]
        trajectory: Option<u64>,
    },
    /// Phases that find the marked state with certainty in exactly J steps.
    Certain {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long, short = 'J')]
        iterations: u64,
        /// Replay the solution in an N-dimensional state-vector simulation.
        #[arg(long, value_name = "N")]
        verify: Option<usize>,
        /// Prefer the root closest to this θ.
        #[arg(long, allow_negative_numbers = true, default_value_t = PI)]
        near: f64,
    },
    /// State-vector simulation next to the two-level prediction.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        marked: Vec<usize>,
        #[arg(long, allow_negative_numbers = true, default_value_t = PI)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = PI)]
        phi: f64,
        #[arg(long)]
        iterations: u64,
        #[arg(long, value_enum, default_value_t = UnitaryChoice::Hadamard)]
        unitary: UnitaryChoice,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start from sin θ₀|1⟩ + cos θ₀ e^{iδ}|2⟩ instead of U|γ⟩.
        #[arg(long, allow_negative_numbers = true)]
        theta0: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        delta: f64,
        /// Index of the reference state |γ⟩.
        #[arg(long, default_value_t = 0)]
        gamma: usize,
        #[arg(long, value_enum, default_value_t = PathChoice::RankOne)]
        path: PathChoice,
    },
    /// Half-width of the φ-mismatch window against N.
    ScanTolerance {
        #[arg(long, value_delimiter = ',', default_values_t = (4..=12).map(|k| 1usize << k))]
        n_list: Vec<usize>,
        #[arg(long, allow_negative_numbers = true, default_value_t = PI)]
        theta: f64,
    },
    /// Recompute the published a = 2/400 example and compare.
    VerifyAppendix {
        #[arg(long, value_enum, default_value_t = RoundingChoice::FloorPlusOne)]
        rounding: RoundingChoice,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitaryChoice {
    /// Walsh–Hadamard transform; N a power of two.
    Hadamard,
    /// Seeded random dense unitary.
    Random,
    /// Householder reflection onto the uniform superposition; any N.
    Reflector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    RankOne,
    Conjugation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoundingChoice {
    FloorPlusOne,
    Nearest,
}
