//! The phase-matching condition
//!
//! ```text
//! tan(θ/2)[cos 2β + tan θ₀ cos δ sin 2β] = tan(φ/2)[1 − tan θ₀ sin δ sin 2β tan(θ/2)]
//! ```
//!
//! which holds exactly when the north pole lies on the circle traced by the
//! polarization vector. Residuals and the φ solver work on the form
//! multiplied through by `cos(θ/2) cos(φ/2)`, so θ = π and φ = π (standard
//! Grover) are regular points.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{InitialState2D, PhasePair, SearchGeometry, TwoDimState};
use crate::scalar::{canonical_angle, lit, Real};

/// Residual `L − R` of the cross-multiplied condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResidual<T> {
    pub lhs: T,
    pub rhs: T,
    /// `lhs − rhs`.
    pub value: T,
    /// `value / max(|lhs|, |rhs|, 1)`.
    pub normalized: T,
}

impl<T: Real> MatchResidual<T> {
    pub fn is_satisfied(&self, tol: T) -> bool {
        self.normalized.abs() <= tol
    }
}

/// Both sides of the condition in its printed `tan` form. Either side may be
/// infinite at θ = π or φ = π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchSides<T> {
    pub lhs: T,
    pub rhs: T,
}

fn tan_theta0<T: Real>(init: &InitialState2D<T>) -> Result<T> {
    if init.theta0.cos().abs() <= T::tolerances().unitarity {
        return Err(Error::DegenerateInitialState);
    }
    Ok(init.theta0.tan())
}

/// `(cos 2β + tan θ₀ cos δ sin 2β, tan θ₀ sin δ sin 2β)`.
fn initial_terms<T: Real>(geom: &SearchGeometry<T>, init: &InitialState2D<T>) -> Result<(T, T)> {
    let t0 = tan_theta0(init)?;
    let (s2b, c2b) = (geom.beta + geom.beta).sin_cos();
    let (sd, cd) = init.delta.sin_cos();
    Ok((c2b + t0 * cd * s2b, t0 * sd * s2b))
}

pub fn matching_residual<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> Result<MatchResidual<T>> {
    let (bracket, cross) = initial_terms(geom, init)?;
    let half = lit::<T>(0.5);
    let (st, ct) = (phases.theta * half).sin_cos();
    let (sp, cp) = (phases.phi * half).sin_cos();
    let lhs = st * cp * bracket;
    let rhs = sp * ct - cross * sp * st;
    let value = lhs - rhs;
    let scale = lhs.abs().max(rhs.abs()).max(T::one());
    Ok(MatchResidual {
        lhs,
        rhs,
        value,
        normalized: value / scale,
    })
}

/// Sides of the condition exactly as printed, with the tangents.
pub fn matching_sides<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> Result<MatchSides<T>> {
    let (bracket, cross) = initial_terms(geom, init)?;
    let half = lit::<T>(0.5);
    let tt = (phases.theta * half).tan();
    let tp = (phases.phi * half).tan();
    Ok(MatchSides {
        lhs: tt * bracket,
        rhs: tp * (T::one() - cross * tt),
    })
}

/// Solves the condition for φ at fixed θ; the unique root in (−π, π].
pub fn solve_phi<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    theta: T,
) -> Result<PhasePair<T>> {
    let (bracket, cross) = initial_terms(geom, init)?;
    let half = lit::<T>(0.5);
    let theta = canonical_angle(theta);
    let (st, ct) = (theta * half).sin_cos();
    let num = st * bracket;
    let den = ct - cross * st;
    let tol = T::tolerances().residual;
    if num.abs() <= tol && den.abs() <= tol {
        return Err(Error::NoSolution);
    }
    let two = T::one() + T::one();
    PhasePair::new(theta, two * num.atan2(den))
}

/// φ with `tan(φ/2) = tan(θ/2)(1 − 2a)`.
pub fn hoyer_phi<T: Real>(theta: T, a: T) -> Result<T> {
    if !(a > T::zero() && a < T::one()) {
        return Err(Error::InvalidInput(format!("success weight a = {a} outside (0, 1)")));
    }
    let half = lit::<T>(0.5);
    let (st, ct) = (canonical_angle(theta) * half).sin_cos();
    let scale = T::one() - (a + a);
    // cos(θ/2) ≥ 0, so atan2 picks the principal arctan and keeps θ = π regular.
    let two = T::one() + T::one();
    let phi = two * (st * scale).atan2(ct);
    Ok(canonical_angle(phi))
}

/// Phases for a single final iteration that lands exactly on the marked state
/// from `sin θ₀|1⟩ + cos θ₀|2⟩`:
/// `cos φ · tan θ₀ sin 2β = −cos 2β` and `sin φ · tan θ₀ sin 2β = cot(θ/2)`.
///
/// Returns the branch with φ ∈ [0, π]; negating both angles gives the other.
pub fn brassard_final_step<T: Real>(geom: &SearchGeometry<T>, theta0: T) -> Result<PhasePair<T>> {
    if theta0.cos().abs() <= T::tolerances().unitarity {
        return Err(Error::DegenerateInitialState);
    }
    let (s2b, c2b) = (geom.beta + geom.beta).sin_cos();
    let k = theta0.tan() * s2b;
    let arg = -c2b / k;
    let slack = T::tolerances().equality;
    if !arg.is_finite() || arg.abs() > T::one() + slack {
        return Err(Error::NoCertaintyStep {
            argument: arg.to_f64().unwrap_or(f64::NAN),
        });
    }
    let phi = arg.max(-T::one()).min(T::one()).acos();
    let cot_half_theta = phi.sin() * k;
    let two = T::one() + T::one();
    let theta = two * T::one().atan2(cot_half_theta);
    PhasePair::new(theta, phi)
}

/// Standard-Grover iteration count `m′` and the angle `θ₀ = (2m′+1)β` it
/// reaches, one step short of the marked state.
pub fn brassard_preparation<T: Real>(geom: &SearchGeometry<T>) -> (u64, T) {
    let b = geom.beta;
    let ratio = (T::FRAC_PI_2() - b) / (b + b);
    let eps = T::tolerances().equality;
    let m_prime = ((ratio - eps).ceil() - T::one()).max(T::zero());
    let theta0 = (m_prime + m_prime + T::one()) * b;
    (m_prime.to_u64().unwrap(), theta0)
}

/// Strips the global phase so the `|1⟩` coefficient is real and non-negative,
/// returning `(θ₀, δ)`. δ is reported as 0 when either amplitude vanishes.
pub fn extract_initial_parameters<T: Real>(state: &TwoDimState<T>) -> InitialState2D<T> {
    let r1 = state.amp1.norm();
    let r2 = state.amp2.norm();
    let theta0 = r1.atan2(r2);
    let tol = T::tolerances().unitarity;
    let delta = if r1 <= tol || r2 <= tol {
        T::zero()
    } else {
        let phase = Complex::cis(-state.amp1.arg());
        canonical_angle((state.amp2 * phase).arg())
    };
    InitialState2D { theta0, delta }
}

/// Which known special case a matched (init, phases) configuration reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// Initial state `U|γ⟩`, where the condition reads θ = φ.
    EqualPhases,
    /// `tan(φ/2) = tan(θ/2)(1 − 2 sin²β)`.
    Hoyer,
    /// Real initial state one step from the target, single exact final step.
    FinalStep,
    General,
}

impl SpecialCase {
    pub fn name(&self) -> &'static str {
        match self {
            SpecialCase::EqualPhases => "theta_equals_phi",
            SpecialCase::Hoyer => "hoyer",
            SpecialCase::FinalStep => "brassard_final_step",
            SpecialCase::General => "general",
        }
    }
}

pub fn classify_special_case<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> SpecialCase {
    let tol = T::tolerances().equality;
    let close = |a: T, b: T| canonical_angle(a - b).abs() <= tol;
    if (init.theta0 - geom.beta).abs() <= tol && init.delta.abs() <= tol {
        return SpecialCase::EqualPhases;
    }
    if init.delta.abs() <= tol {
        if let Ok(step) = brassard_final_step(geom, init.theta0) {
            let same = close(step.theta, phases.theta) && close(step.phi, phases.phi);
            let mirrored = close(-step.theta, phases.theta) && close(-step.phi, phases.phi);
            if same || mirrored {
                return SpecialCase::FinalStep;
            }
        }
    }
    if let Ok(phi) = hoyer_phi(phases.theta, geom.weight()) {
        if close(phi, phases.phi) {
            return SpecialCase::Hoyer;
        }
    }
    SpecialCase::General
}
