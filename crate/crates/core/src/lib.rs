//! Generalized Grover search with arbitrary phase rotations.
//!
//! One iteration `Q = −U I_γ U⁻¹ I_τ` multiplies the reference state `|γ⟩`
//! by `e^{iθ}` (conjugated by an arbitrary unitary `U`) and the marked states
//! by `e^{iφ}`. Restricted to the plane spanned by the marked and unmarked
//! parts of `U|γ⟩`, each iteration is a fixed rotation of the polarization
//! vector on the unit sphere. This crate provides
//!
//! * [`geometry`]: the 2×2 operator, its SO(3) image, axis and angle;
//! * [`matching`]: the phase-matching condition, its φ solver and the known
//!   special cases;
//! * [`planner`]: iteration counts, trajectories, Høyer's preparation and
//!   exact searches at a prescribed step count;
//! * [`oracle`]: a full state-vector simulator used to cross-check all of the
//!   above.
//!
//! Everything is generic over [`Real`] (`f64` or `f32`); the `*64` aliases
//! below fix the reference precision.

pub mod error;
pub mod geometry;
pub mod matching;
pub mod oracle;
pub mod planner;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{
    axis_angle_from_matrix, build_search_operator, polarization_of, rotate_polarization,
    rotation_axis_angle, success_probability, su2_to_so3, AxisAngle, InitialState2D, PhasePair,
    PolarizationVector, SearchGeometry, So3Matrix, So3Rotation, Su2Matrix, TwoDimState,
};
pub use matching::{
    brassard_final_step, extract_initial_parameters, hoyer_phi, matching_residual, solve_phi,
    MatchResidual,
};
pub use oracle::{EngineConfig, MarkedSet, StateVector, UnitarySpec};
pub use planner::{
    certainty_search, grover_probability, hoyer_preparation, log_log_slope, mismatch_tolerance,
    optimal_iterations, peak_probability, probability_trajectory, step_angle, total_angle,
    CertaintySolution, HoyerPrep, IterationPlan, MismatchTolerance, Rounding,
};
pub use scalar::{canonical_angle, Real, Tolerances};

pub type PhasePair64 = PhasePair<f64>;
pub type SearchGeometry64 = SearchGeometry<f64>;
pub type InitialState2D64 = InitialState2D<f64>;
pub type TwoDimState64 = TwoDimState<f64>;
pub type Su2Matrix64 = Su2Matrix<f64>;
pub type So3Matrix64 = So3Matrix<f64>;
pub type So3Rotation64 = So3Rotation<f64>;
pub type PolarizationVector64 = PolarizationVector<f64>;
pub type StateVector64 = StateVector<f64>;
pub type EngineConfig64 = EngineConfig<f64>;
pub type IterationPlan64 = IterationPlan<f64>;
pub type CertaintySolution64 = CertaintySolution<f64>;
pub type HoyerPrep64 = HoyerPrep<f64>;

pub type PhasePair32 = PhasePair<f32>;
pub type SearchGeometry32 = SearchGeometry<f32>;
pub type Su2Matrix32 = Su2Matrix<f32>;
pub type StateVector32 = StateVector<f32>;
