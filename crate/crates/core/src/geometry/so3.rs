use std::ops::Mul;

use num_complex::Complex;

use super::vec3::{self, Vec3};
use super::{PhasePair, PolarizationVector, SearchGeometry, Su2Matrix};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Real 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3Matrix<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> So3Matrix<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.m;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[j][i];
            }
        }
        Self { m: out }
    }

    pub fn det(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        [
            vec3::dot(&m[0], v),
            vec3::dot(&m[1], v),
            vec3::dot(&m[2], v),
        ]
    }

    pub fn rotate(&self, r: &PolarizationVector<T>) -> PolarizationVector<T> {
        PolarizationVector::from_array_unchecked(self.apply(&r.to_array()))
    }

    /// `max |(RᵀR − I)ᵢⱼ|`.
    pub fn orthogonality_deviation(&self) -> T {
        (self.transpose() * *self).max_abs_diff(&Self::identity())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        worst
    }
}

impl<T: Real> Mul for So3Matrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).fold(T::zero(), |acc, k| acc + self.m[i][k] * rhs.m[k][j]);
            }
        }
        Self { m: out }
    }
}

fn pauli<T: Real>() -> [Su2Matrix<T>; 3] {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    [
        Su2Matrix::new([[z, o], [o, z]]),
        Su2Matrix::new([[z, -i], [i, z]]),
        Su2Matrix::new([[o, z], [z, -o]]),
    ]
}

/// Adjoint action `Rᵢⱼ = ½ Tr(σᵢ q σⱼ q†)`.
///
/// With this orientation `polarization(q·ψ) = R · polarization(ψ)`. The map
/// is blind to a global phase of `q`.
pub fn su2_to_so3<T: Real>(q: &Su2Matrix<T>) -> Result<So3Matrix<T>> {
    let deviation = q.unitarity_deviation();
    if !(deviation <= T::tolerances().unitarity) {
        return Err(Error::NotUnitary {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sigma = pauli::<T>();
    let qd = q.adjoint();
    let half = lit::<T>(0.5);
    let mut out = [[T::zero(); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let p = sigma[i] * *q * sigma[j] * qd;
            *v = half * (p.m[0][0] + p.m[1][1]).re;
        }
    }
    Ok(So3Matrix { m: out })
}

/// Proper rotation by `alpha` ∈ (0, π] about the unit vector `axis`
/// (right-handed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3Rotation<T> {
    pub axis: Vec3<T>,
    pub alpha: T,
}

impl<T: Real> So3Rotation<T> {
    pub fn new(axis: Vec3<T>, alpha: T) -> Result<Self> {
        let n = vec3::norm(&axis);
        if !(n > T::zero()) || !n.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidInput("rotation axis must be a finite non-zero vector".into()));
        }
        Ok(Self {
            axis: vec3::scale(&axis, T::one() / n),
            alpha,
        })
    }

    /// Rotation matrix for angle `omega` about this axis.
    pub fn matrix(&self, omega: T) -> So3Matrix<T> {
        let (s, c) = omega.sin_cos();
        let [x, y, z] = self.axis;
        let t = T::one() - c;
        So3Matrix {
            m: [
                [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
                [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
                [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
            ],
        }
    }
}

/// Axis–angle form of one iteration. `Identity` carries no axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisAngle<T> {
    Identity,
    Rotation(So3Rotation<T>),
}

impl<T: Real> AxisAngle<T> {
    /// Per-iteration rotation angle; zero for the identity.
    pub fn alpha(&self) -> T {
        match self {
            AxisAngle::Identity => T::zero(),
            AxisAngle::Rotation(r) => r.alpha,
        }
    }

    pub fn rotation(&self) -> Option<&So3Rotation<T>> {
        match self {
            AxisAngle::Identity => None,
            AxisAngle::Rotation(r) => Some(r),
        }
    }

    /// Turns `r0` by total angle `omega` about the axis; the identity leaves
    /// it in place.
    pub fn rotate(&self, r0: &PolarizationVector<T>, omega: T) -> PolarizationVector<T> {
        match self {
            AxisAngle::Identity => *r0,
            AxisAngle::Rotation(rot) => rotate_polarization(r0, rot, omega),
        }
    }
}

/// Scalar part `s₀` and vector part `w` of the unit-determinant factor of the
/// search operator, `Q ∝ s₀·I + i w·σ`.
///
/// `w` is the rotation axis with every singular factor multiplied out, so it
/// stays finite for all angles and vanishes only for the identity.
pub(crate) fn quaternion_parts<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> (T, Vec3<T>) {
    let half = lit::<T>(0.5);
    let (st, ct) = (phases.theta * half).sin_cos();
    let (sp, cp) = (phases.phi * half).sin_cos();
    let (s2b, c2b) = (geom.beta + geom.beta).sin_cos();
    let s0 = ct * cp + st * sp * c2b;
    let w = [st * cp * s2b, st * sp * s2b, ct * sp - st * cp * c2b];
    (s0, w)
}

/// Axis and angle of the polarization-picture rotation performed by one
/// iteration, from closed-form expressions in (β, θ, φ).
///
/// The axis is parallel to `(cot φ/2, 1, −cot 2β cot φ/2 + cot θ/2 csc 2β)`,
/// oriented so that turning by `alpha` reproduces the operator.
pub fn rotation_axis_angle<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> AxisAngle<T> {
    let (s0, w) = quaternion_parts(geom, phases);
    let wn = vec3::norm(&w);
    if wn <= T::epsilon() * T::epsilon() {
        return AxisAngle::Identity;
    }
    let two = T::one() + T::one();
    let alpha = two * wn.atan2(s0.abs());
    let sign = if s0 < T::zero() { T::one() } else { -T::one() };
    AxisAngle::Rotation(So3Rotation {
        axis: vec3::scale(&w, sign / wn),
        alpha,
    })
}

/// `cos α` as a trigonometric polynomial in (β, θ, φ).
pub fn cos_step_angle<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> T {
    let (t, p, b) = (phases.theta, phases.phi, geom.beta);
    let half = lit::<T>(0.5);
    let quarter = lit::<T>(0.25);
    let s2b = (b + b).sin();
    let sth = (t * half).sin();
    quarter * ((lit::<T>(4.0) * b).cos() + lit(3.0)) * t.cos() * p.cos()
        + s2b * s2b * (half * p.cos() - sth * sth)
        + (b + b).cos() * t.sin() * p.sin()
}

/// Entry-by-entry closed form of the iteration's rotation matrix in the
/// transposed orientation (it maps `polarization(q·ψ)` back to
/// `polarization(ψ)`). Equal to `su2_to_so3(q).transpose()`.
pub fn transcribed_rotation_matrix<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> So3Matrix<T> {
    let (t, p, b) = (phases.theta, phases.phi, geom.beta);
    let half = lit::<T>(0.5);
    let (s2, c2) = (b + b).sin_cos();
    let s4 = (lit::<T>(4.0) * b).sin();
    let c4 = (lit::<T>(4.0) * b).cos();
    let (st, ct) = t.sin_cos();
    let (sp, cp) = p.sin_cos();
    let sh = (t * half).sin();
    let ch = (t * half).cos();
    let sh2 = sh * sh;
    So3Matrix {
        m: [
            [
                cp * (c2 * c2 * ct + s2 * s2) + c2 * st * sp,
                cp * st * c2 - ct * sp,
                -cp * s4 * sh2 + s2 * st * sp,
            ],
            [
                -c2 * cp * st + (ch * ch - c4 * sh2) * sp,
                ct * cp + c2 * st * sp,
                -cp * s2 * st - s4 * sh2 * sp,
            ],
            [-s4 * sh2, s2 * st, c2 * c2 + ct * s2 * s2],
        ],
    }
}

/// Axis–angle decomposition of a rotation matrix, with α ∈ [0, π].
///
/// Near α = π the axis comes from the symmetric part; its sign is only
/// meaningful up to the antipodal ambiguity there.
pub fn axis_angle_from_matrix<T: Real>(r: &So3Matrix<T>) -> AxisAngle<T> {
    let m = &r.m;
    let half = lit::<T>(0.5);
    let v = [
        (m[2][1] - m[1][2]) * half,
        (m[0][2] - m[2][0]) * half,
        (m[1][0] - m[0][1]) * half,
    ];
    let sin_a = vec3::norm(&v);
    let cos_a = (r.trace() - T::one()) * half;
    let alpha = sin_a.atan2(cos_a);
    if alpha <= T::epsilon() * lit(16.0) && cos_a > T::zero() {
        return AxisAngle::Identity;
    }
    let axis = if cos_a >= T::zero() {
        vec3::scale(&v, T::one() / sin_a)
    } else {
        // n nᵀ = (R + Rᵀ − 2 cos α I) / (2 (1 − cos α))
        let denom = lit::<T>(2.0) * (T::one() - cos_a);
        let sym = |i: usize, j: usize| {
            let d = if i == j { cos_a + cos_a } else { T::zero() };
            (m[i][j] + m[j][i] - d) / denom
        };
        let k = (0..3)
            .max_by(|&a, &b| sym(a, a).partial_cmp(&sym(b, b)).unwrap())
            .unwrap();
        let nk = sym(k, k).max(T::zero()).sqrt();
        let mut n = [T::zero(); 3];
        for (i, ni) in n.iter_mut().enumerate() {
            *ni = if i == k { nk } else { sym(i, k) / nk };
        }
        let n = vec3::scale(&n, T::one() / vec3::norm(&n));
        if vec3::dot(&n, &v) < T::zero() {
            vec3::scale(&n, -T::one())
        } else {
            n
        }
    };
    AxisAngle::Rotation(So3Rotation { axis, alpha })
}

/// Rodrigues' formula:
/// `r₀ cos ω + l̂(l̂·r₀)(1 − cos ω) + (l̂ × r₀) sin ω`.
pub fn rotate_polarization<T: Real>(
    r0: &PolarizationVector<T>,
    rot: &So3Rotation<T>,
    omega: T,
) -> PolarizationVector<T> {
    let r = r0.to_array();
    let l = &rot.axis;
    let (s, c) = omega.sin_cos();
    let along = vec3::scale(l, vec3::dot(l, &r) * (T::one() - c));
    let perp = vec3::scale(&vec3::cross(l, &r), s);
    let out = [
        r[0] * c + along[0] + perp[0],
        r[1] * c + along[1] + perp[1],
        r[2] * c + along[2] + perp[2],
    ];
    PolarizationVector::from_array_unchecked(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_search_operator, polarization_of, InitialState2D, TwoDimState};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn q(beta: f64, theta: f64, phi: f64) -> Su2Matrix<f64> {
        build_search_operator(&SearchGeometry::new(beta).unwrap(), &PhasePair::new(theta, phi).unwrap())
    }

    #[test]
    fn identity_maps_to_identity() {
        let r = su2_to_so3(&Su2Matrix::<f64>::identity()).unwrap();
        assert!(r.max_abs_diff(&So3Matrix::identity()) < 1e-15);
    }

    #[test]
    fn grover_is_rotation_about_y_by_four_beta() {
        for beta in [0.05, 0.3, PI / 6.0, 0.7] {
            let r = su2_to_so3(&q(beta, PI, PI)).unwrap();
            // right-handed rotation by 4β about −y
            let want = So3Rotation::new([0.0, -1.0, 0.0], 4.0 * beta).unwrap().matrix(4.0 * beta);
            assert!(r.max_abs_diff(&want) < 1e-14, "beta={beta}");
        }
    }

    #[test]
    fn closed_form_axis_at_sixth_pi() {
        let geom = SearchGeometry::new(PI / 6.0).unwrap();
        let AxisAngle::Rotation(rot) = rotation_axis_angle(&geom, &PhasePair::grover()) else {
            panic!("expected proper rotation");
        };
        assert!((rot.alpha - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!(vec3::max_abs_diff(&rot.axis, &[0.0, -1.0, 0.0]) < 1e-15);
    }

    #[test]
    fn zero_phases_flag_identity() {
        let geom = SearchGeometry::new(0.4).unwrap();
        assert_eq!(rotation_axis_angle(&geom, &PhasePair::new(0.0, 0.0).unwrap()), AxisAngle::Identity);
        let r = su2_to_so3(&q(0.4, 0.0, 0.0)).unwrap();
        assert_eq!(axis_angle_from_matrix(&r), AxisAngle::Identity);
    }

    #[test]
    fn appendix_axis_matches_decomposition() {
        let geom = SearchGeometry::from_weight(0.005).unwrap();
        let phases = PhasePair::new(FRAC_PI_2, 2.0 * 0.99f64.atan()).unwrap();
        let closed = rotation_axis_angle(&geom, &phases);
        let decomp = axis_angle_from_matrix(&su2_to_so3(&build_search_operator(&geom, &phases)).unwrap());
        let (a, b) = (closed.rotation().unwrap(), decomp.rotation().unwrap());
        assert!((a.alpha - b.alpha).abs() < 1e-10);
        assert!(vec3::max_abs_diff(&a.axis, &b.axis) < 1e-10);
        assert!((cos_step_angle(&geom, &phases) - a.alpha.cos()).abs() < 1e-12);
    }

    #[test]
    fn transcription_is_transpose_of_conjugation() {
        for &(b, t, p) in &[(0.3, 1.0, -2.0), (1.1, -0.4, 2.9), (0.05, PI, 0.3)] {
            let r = su2_to_so3(&q(b, t, p)).unwrap();
            let printed = transcribed_rotation_matrix(&SearchGeometry::new(b).unwrap(), &PhasePair::new(t, p).unwrap());
            assert!(printed.max_abs_diff(&r.transpose()) < 1e-14);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let bad = Su2Matrix::<f64>::identity().scale(Complex::new(1.1, 0.0));
        assert!(matches!(su2_to_so3(&bad), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn half_turn_decomposition() {
        let rot = So3Rotation::new([1.0, 2.0, -2.0], PI).unwrap();
        let AxisAngle::Rotation(d) = axis_angle_from_matrix(&rot.matrix(PI)) else {
            panic!()
        };
        assert!((d.alpha - PI).abs() < 1e-12);
        let same = vec3::max_abs_diff(&d.axis, &rot.axis) < 1e-12;
        let flipped = vec3::max_abs_diff(&d.axis, &vec3::scale(&rot.axis, -1.0)) < 1e-12;
        assert!(same || flipped);
    }

    #[test]
    fn rodrigues_cases() {
        let r0 = PolarizationVector::new(3f64.sqrt() / 2.0, 0.0, -0.5).unwrap();
        let rot = So3Rotation::new([0.0, -1.0, 0.0], 2.0 * PI / 3.0).unwrap();
        let r1 = rotate_polarization(&r0, &rot, 2.0 * PI / 3.0);
        assert!(r1.max_abs_diff(&PolarizationVector::target()) < 1e-15);

        assert!(rotate_polarization(&r0, &rot, 0.0).max_abs_diff(&r0) < 1e-16);

        let on_axis = PolarizationVector::new(0.0, -1.0, 0.0).unwrap();
        for w in [0.3, 2.0, -5.0] {
            assert!(rotate_polarization(&on_axis, &rot, w).max_abs_diff(&on_axis) < 1e-15);
        }
    }

    #[test]
    fn one_step_matches_su2_action() {
        let geom = SearchGeometry::new(0.37).unwrap();
        let phases = PhasePair::new(1.3, 0.2).unwrap();
        let init = InitialState2D::new(0.9, -1.1).unwrap();
        let stepped: TwoDimState<f64> = build_search_operator(&geom, &phases).apply(&init.state());
        let via_state = polarization_of(&stepped).unwrap();
        let via_rot = rotation_axis_angle(&geom, &phases).rotate(&init.polarization(), rotation_axis_angle(&geom, &phases).alpha());
        assert!(via_state.max_abs_diff(&via_rot) < 1e-14);
    }
}
