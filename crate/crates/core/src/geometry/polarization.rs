use super::vec3::{self, Vec3};
use super::TwoDimState;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Expectation of the Pauli vector, `⟨ψ|σ|ψ⟩`. The marked state sits at the
/// north pole `(0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> PolarizationVector<T> {
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let r = Self { x, y, z };
        let n = vec3::dot(&r.to_array(), &r.to_array());
        if !n.is_finite() || (n - T::one()).abs() > T::tolerances().unitarity {
            return Err(Error::NotNormalized {
                norm_sq: n.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(r)
    }

    pub(crate) fn from_array_unchecked(a: Vec3<T>) -> Self {
        Self { x: a[0], y: a[1], z: a[2] }
    }

    /// The marked-state pole.
    pub fn target() -> Self {
        Self {
            x: T::zero(),
            y: T::zero(),
            z: T::one(),
        }
    }

    pub fn to_array(&self) -> Vec3<T> {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> T {
        vec3::norm(&self.to_array())
    }

    pub(crate) fn from_state(s: &TwoDimState<T>) -> Self {
        let (a, b) = (s.amp1.re, s.amp1.im);
        let (c, d) = (s.amp2.re, s.amp2.im);
        let two = T::one() + T::one();
        Self {
            x: two * (a * c + b * d),
            y: two * (a * d - b * c),
            z: a * a + b * b - c * c - d * d,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        vec3::max_abs_diff(&self.to_array(), &other.to_array())
    }
}

/// Polarization vector of a normalized two-level state.
pub fn polarization_of<T: Real>(state: &TwoDimState<T>) -> Result<PolarizationVector<T>> {
    state.check_normalized()?;
    Ok(PolarizationVector::from_state(state))
}

/// Marked-state probability `(z + 1)/2`, clamped to [0, 1] against rounding.
pub fn success_probability<T: Real>(r: &PolarizationVector<T>) -> T {
    let two = T::one() + T::one();
    ((r.z + T::one()) / two).max(T::zero()).min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use std::f64::consts::PI;

    #[test]
    fn poles() {
        let up = polarization_of(&TwoDimState::<f64>::marked()).unwrap();
        assert_eq!(up.to_array(), [0.0, 0.0, 1.0]);
        assert_eq!(success_probability(&up), 1.0);
        let down = polarization_of(&TwoDimState::<f64>::unmarked()).unwrap();
        assert_eq!(down.to_array(), [0.0, 0.0, -1.0]);
        assert_eq!(success_probability(&down), 0.0);
    }

    #[test]
    fn standard_state_at_sixth_pi() {
        let b = PI / 6.0;
        let s = TwoDimState::new(Complex::new(b.sin(), 0.0), Complex::new(b.cos(), 0.0)).unwrap();
        let r = polarization_of(&s).unwrap();
        let want = [3f64.sqrt() / 2.0, 0.0, -0.5];
        assert!(vec3::max_abs_diff(&r.to_array(), &want) < 1e-15);
        assert!((success_probability(&r) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        let s = TwoDimState::new_unchecked(Complex::new(1.0, 0.0), Complex::new(1.0, 0.0));
        assert!(matches!(polarization_of(&s), Err(Error::NotNormalized { .. })));
        assert!(PolarizationVector::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn complex_amplitudes_follow_pauli_expectation() {
        // amp1 = (1+i)/2, amp2 = (1-i)/2: x = 2 Re(conj(a1) a2) = 0, y = 2 Im(conj(a1) a2) = -1
        let s = TwoDimState::new(Complex::new(0.5, 0.5), Complex::new(0.5, -0.5)).unwrap();
        let r = polarization_of(&s).unwrap();
        assert!(vec3::max_abs_diff(&r.to_array(), &[0.0, -1.0, 0.0]) < 1e-15);
    }
}
