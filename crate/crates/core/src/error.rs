use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("degenerate initial state: θ₀ = π/2 is already the marked state")]
    DegenerateInitialState,

    #[error("degenerate search geometry: {0}")]
    DegenerateSearch(String),

    #[error("phase matching condition has no solution for φ at this θ")]
    NoSolution,

    #[error("no certainty step possible: arccos argument {argument} out of range")]
    NoCertaintyStep { argument: f64 },

    #[error("operator makes no progress (rotation angle α = 0)")]
    NoProgress,

    #[error("rotation axis is parallel to {0}; total angle undefined")]
    AxisParallel(&'static str),

    #[error("no θ in (0, π] reaches the marked state in exactly {iterations} iterations")]
    InfeasibleIterations { iterations: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
