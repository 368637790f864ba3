//! Two-level representation of the search operator and its image in the
//! polarization (Bloch-vector) picture.
//!
//! The operator `Q = −U I_γ U⁻¹ I_τ` leaves the plane spanned by the
//! normalized marked component `|1⟩` and unmarked component `|2⟩` of `U|γ⟩`
//! invariant. Inside that plane it is a 2×2 unitary ([`Su2Matrix`]); its
//! adjoint action on the Pauli vector is a proper rotation of ℝ³
//! ([`So3Matrix`]), and every iteration turns the polarization vector of the
//! state by the same angle about the same axis.

mod polarization;
mod so3;
mod su2;
pub(crate) mod vec3;

pub use polarization::{polarization_of, success_probability, PolarizationVector};
pub use so3::{
    axis_angle_from_matrix, cos_step_angle, rotate_polarization, rotation_axis_angle,
    su2_to_so3, transcribed_rotation_matrix, AxisAngle, So3Matrix, So3Rotation,
};
pub use su2::{build_search_operator, Su2Matrix};
pub use vec3::Vec3;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{canonical_angle, Real};

/// The two selective phase rotations of the engine: `theta` acts on the
/// reference state `|γ⟩`, `phi` on the marked states. Both in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> PhasePair<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidInput("phase angles must be finite".into()));
        }
        Ok(Self {
            theta: canonical_angle(theta),
            phi: canonical_angle(phi),
        })
    }

    /// Standard Grover inversions, θ = φ = π.
    pub fn grover() -> Self {
        Self {
            theta: T::PI(),
            phi: T::PI(),
        }
    }
}

/// Angle β with `sin β = √(Σₖ |U_{τₖγ}|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchGeometry<T> {
    pub beta: T,
}

impl<T: Real> SearchGeometry<T> {
    /// Requires 0 < β < π/2; the endpoints are trivial searches.
    pub fn new(beta: T) -> Result<Self> {
        if !beta.is_finite() || beta <= T::zero() || beta >= T::FRAC_PI_2() {
            return Err(Error::DegenerateSearch(format!(
                "β = {beta} outside (0, π/2)"
            )));
        }
        Ok(Self { beta })
    }

    /// Geometry from the marked weight `a = sin²β` of the reference state.
    pub fn from_weight(a: T) -> Result<Self> {
        if !(a > T::zero() && a < T::one()) {
            return Err(Error::DegenerateSearch(format!(
                "marked weight {a} outside (0, 1)"
            )));
        }
        Self::new(a.sqrt().asin())
    }

    /// Uniform search over `n` items with `marked` of them marked.
    pub fn uniform(n: usize, marked: usize) -> Result<Self> {
        let n = T::from_usize(n).unwrap();
        let k = T::from_usize(marked).unwrap();
        Self::from_weight(k / n)
    }

    /// Marked weight `a = sin²β`.
    pub fn weight(&self) -> T {
        let s = self.beta.sin();
        s * s
    }
}

/// Initial state `sin θ₀|1⟩ + cos θ₀ e^{iδ}|2⟩` with θ₀ ∈ [0, π/2] and the
/// global phase chosen so the `|1⟩` coefficient is real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState2D<T> {
    pub theta0: T,
    pub delta: T,
}

impl<T: Real> InitialState2D<T> {
    pub fn new(theta0: T, delta: T) -> Result<Self> {
        if !theta0.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidInput("initial angles must be finite".into()));
        }
        if theta0 < T::zero() || theta0 > T::FRAC_PI_2() {
            return Err(Error::InvalidInput(format!(
                "θ₀ = {theta0} outside [0, π/2]; use InitialState2D::canonical"
            )));
        }
        Ok(Self {
            theta0,
            delta: canonical_angle(delta),
        })
    }

    /// Accepts any real θ₀ and folds it into canonical form, absorbing sign
    /// flips of either amplitude into the global phase and δ.
    pub fn canonical(theta0: T, delta: T) -> Result<Self> {
        if !theta0.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidInput("initial angles must be finite".into()));
        }
        let state = TwoDimState::new_unchecked(
            Complex::new(theta0.sin(), T::zero()),
            Complex::from_polar(theta0.cos(), delta),
        );
        Ok(crate::matching::extract_initial_parameters(&state))
    }

    /// The reference state `U|γ⟩ = sin β|1⟩ + cos β|2⟩`.
    pub fn standard(geom: &SearchGeometry<T>) -> Self {
        Self {
            theta0: geom.beta,
            delta: T::zero(),
        }
    }

    pub fn state(&self) -> TwoDimState<T> {
        TwoDimState::new_unchecked(
            Complex::new(self.theta0.sin(), T::zero()),
            Complex::from_polar(self.theta0.cos(), self.delta),
        )
    }

    pub fn polarization(&self) -> PolarizationVector<T> {
        PolarizationVector::from_state(&self.state())
    }
}

/// A normalized state `amp1|1⟩ + amp2|2⟩` of the invariant plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDimState<T> {
    pub amp1: Complex<T>,
    pub amp2: Complex<T>,
}

impl<T: Real> TwoDimState<T> {
    pub fn new(amp1: Complex<T>, amp2: Complex<T>) -> Result<Self> {
        let state = Self { amp1, amp2 };
        state.check_normalized()?;
        Ok(state)
    }

    pub(crate) fn new_unchecked(amp1: Complex<T>, amp2: Complex<T>) -> Self {
        Self { amp1, amp2 }
    }

    /// The marked state `|1⟩`.
    pub fn marked() -> Self {
        Self::new_unchecked(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    /// The unmarked state `|2⟩`.
    pub fn unmarked() -> Self {
        Self::new_unchecked(Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn norm_sqr(&self) -> T {
        self.amp1.norm_sqr() + self.amp2.norm_sqr()
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if !n.is_finite() || (n - T::one()).abs() > T::tolerances().unitarity {
            return Err(Error::NotNormalized {
                norm_sq: n.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Probability of the marked component, `|amp1|²`.
    pub fn marked_probability(&self) -> T {
        self.amp1.norm_sqr()
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.amp1 - other.amp1)
            .norm()
            .max((self.amp2 - other.amp2).norm())
    }
}
