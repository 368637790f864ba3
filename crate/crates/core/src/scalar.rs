//! Scalar abstraction and the tolerance record shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the library computes in: `f64` (the reference
/// precision) or `f32`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Default tolerances for this precision.
    fn tolerances() -> Tolerances<Self>;
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            equality: 1e-10,
            unitarity: 1e-12,
            residual: 1e-12,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            equality: 1e-4,
            unitarity: 1e-5,
            residual: 1e-5,
        }
    }
}

/// Tolerance constants.
///
/// `equality` is used when two independently computed quantities are compared,
/// `unitarity` guards normalization and unitarity checks on inputs, and
/// `residual` is the pass threshold for the phase-matching residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub equality: T,
    pub unitarity: T,
    pub residual: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        T::tolerances()
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Reduces an angle to the canonical range (−π, π].
pub fn canonical_angle<T: Real>(angle: T) -> T {
    let two_pi = T::TAU();
    let mut a = angle % two_pi;
    if a <= -T::PI() {
        a += two_pi;
    } else if a > T::PI() {
        a -= two_pi;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_range() {
        assert_eq!(canonical_angle(PI), PI);
        assert_eq!(canonical_angle(-PI), PI);
        assert!((canonical_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((canonical_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-15);
        assert_eq!(canonical_angle(0.3), 0.3);
    }
}
