use std::ops::Mul;

use num_complex::Complex;

use super::{PhasePair, SearchGeometry, TwoDimState};
use crate::scalar::Real;

/// 2×2 complex matrix acting on coefficient columns `(amp1, amp2)` in the
/// `(|1⟩, |2⟩)` basis, row-major.
///
/// The search operator carries a global phase, so its determinant is a unit
/// complex number rather than exactly one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Matrix<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Su2Matrix<T> {
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { m: [[o, z], [z, o]] }
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self {
            m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]],
        }
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let m = &self.m;
        Self {
            m: [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]],
        }
    }

    /// `max |(Q†Q − I)ᵢⱼ|`.
    pub fn unitarity_deviation(&self) -> T {
        let p = self.adjoint() * *self;
        let id = Self::identity();
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.m[i][j] - id.m[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn apply(&self, s: &TwoDimState<T>) -> TwoDimState<T> {
        TwoDimState::new_unchecked(
            self.m[0][0] * s.amp1 + self.m[0][1] * s.amp2,
            self.m[1][0] * s.amp1 + self.m[1][1] * s.amp2,
        )
    }

    /// `Qʲ` by repeated squaring.
    pub fn pow(&self, mut j: u64) -> Self {
        let mut acc = Self::identity();
        let mut base = *self;
        while j > 0 {
            if j & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            j >>= 1;
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }
}

impl<T: Real> Mul for Su2Matrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.m, &rhs.m);
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m: out }
    }
}

/// Restriction of `Q = −U I_γ U⁻¹ I_τ` to the invariant plane.
///
/// Column `k` holds the image of basis state `k`, so applying the matrix to a
/// coefficient column advances the state by one iteration.
pub fn build_search_operator<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> Su2Matrix<T> {
    let (s, c) = geom.beta.sin_cos();
    let s2 = s * s;
    let sc = s * c;
    let one = Complex::new(T::one(), T::zero());
    let e_theta = Complex::cis(phases.theta);
    let e_phi = Complex::cis(phases.phi);
    let et1 = e_theta - one;

    Su2Matrix {
        m: [
            [-e_phi * (one + et1 * s2), -et1 * sc],
            [-e_phi * et1 * sc, -e_theta + et1 * s2],
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn appendix_entries() {
        let geom = SearchGeometry::from_weight(0.005).unwrap();
        let phases = PhasePair::new(FRAC_PI_2, 2.0 * 0.99f64.atan()).unwrap();
        let q = build_search_operator(&geom, &phases);
        let q11 = c(-1.0 / 200.0, -199.0 / 200.0);
        let q12 = c(1.0 / 200.0, -1.0 / 200.0) * 199f64.sqrt();
        let q21 = q12 * Complex::cis(2.0 * 0.99f64.atan());
        assert!((q.m[0][0] - q11).norm() < 1e-14);
        assert!((q.m[0][1] - q12).norm() < 1e-14);
        assert!((q.m[1][0] - q21).norm() < 1e-14);
        assert!((q.m[1][1] - q11).norm() < 1e-14);
    }

    #[test]
    fn zero_phases_give_negative_identity() {
        for beta in [0.1, 0.5, 1.2] {
            let q = build_search_operator(&SearchGeometry::new(beta).unwrap(), &PhasePair::new(0.0, 0.0).unwrap());
            let neg = Su2Matrix::<f64>::identity().scale(c(-1.0, 0.0));
            assert!(q.max_abs_diff(&neg) < 1e-15);
        }
    }

    #[test]
    fn grover_quarter_reaches_marked_in_one_step() {
        let geom = SearchGeometry::new(PI / 6.0).unwrap();
        let q = build_search_operator(&geom, &PhasePair::grover());
        let s = q.apply(&crate::geometry::InitialState2D::standard(&geom).state());
        assert!((s.amp1.norm() - 1.0).abs() < 1e-14);
        assert!(s.amp2.norm() < 1e-14);
    }

    #[test]
    fn power_matches_repeated_product() {
        let geom = SearchGeometry::new(0.3).unwrap();
        let q = build_search_operator(&geom, &PhasePair::new(1.1, -0.4).unwrap());
        let mut acc = Su2Matrix::identity();
        for _ in 0..13 {
            acc = acc * q;
        }
        assert!(q.pow(13).max_abs_diff(&acc) < 1e-13);
        assert!(q.pow(0).max_abs_diff(&Su2Matrix::identity()) == 0.0);
    }

    #[test]
    fn determinant_is_unit_modulus() {
        let q = build_search_operator(&SearchGeometry::<f64>::new(0.7).unwrap(), &PhasePair::new(2.0, 0.9).unwrap());
        assert!((q.det().norm() - 1.0).abs() < 1e-14);
        assert!(q.unitarity_deviation() < 1e-14);
    }
}
