//! Iteration planning in the polarization picture: the total angle to the
//! target, the per-step angle, the best measurement step, Høyer's prepared
//! initial state, and exact (certainty) searches at a prescribed step count.

use crate::error::{Error, Result};
use crate::geometry::{
    build_search_operator, rotation_axis_angle, success_probability, vec3, AxisAngle,
    InitialState2D, PhasePair, PolarizationVector, SearchGeometry,
};
use crate::matching::{hoyer_phi, matching_residual, solve_phi};
use crate::scalar::{canonical_angle, lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationPlan<T> {
    pub omega_tot: T,
    pub alpha: T,
    /// `ω_tot / α`.
    pub ratio: T,
    pub j_op: u64,
    pub p_at_jop: T,
    pub p_at_jop_plus_1: T,
    /// `P` at `j_op − 1`, absent when `j_op = 0`.
    pub p_at_jop_minus_1: Option<T>,
    /// `cot(θ/2) csc 2β − cot(φ/2) cot 2β`, the z component of the axis
    /// scaled so its y component is one. Infinite at θ = 0 or φ = 0.
    pub k_param: T,
}

/// Per-iteration rotation angle α ∈ [0, π].
pub fn step_angle<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> T {
    rotation_axis_angle(geom, phases).alpha()
}

pub fn k_param<T: Real>(geom: &SearchGeometry<T>, phases: &PhasePair<T>) -> T {
    let half = lit::<T>(0.5);
    let (s2b, c2b) = (geom.beta + geom.beta).sin_cos();
    let cot = |x: T| x.cos() / x.sin();
    cot(phases.theta * half) / s2b - cot(phases.phi * half) * c2b / s2b
}

/// Angle ω_tot ∈ [0, 2π) the iteration must turn the initial polarization,
/// about its own axis, to reach the azimuth of the marked-state pole.
///
/// Measured between the projections of `r⃗₀` and `(0,0,1)` onto the plane
/// normal to the axis. When the phases are matched the pole lies on the
/// circle and `ω_tot/α` counts iterations to the target.
pub fn total_angle<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> Result<T> {
    let rot = match rotation_axis_angle(geom, phases) {
        AxisAngle::Identity => return Err(Error::NoProgress),
        AxisAngle::Rotation(r) => r,
    };
    let l = rot.axis;
    let r0 = init.polarization().to_array();
    let rf = PolarizationVector::<T>::target().to_array();
    let p0 = vec3::sub(&r0, &vec3::scale(&l, vec3::dot(&l, &r0)));
    let pf = vec3::sub(&rf, &vec3::scale(&l, vec3::dot(&l, &rf)));
    let tol = T::tolerances().unitarity;
    if vec3::norm(&p0) <= tol {
        return Err(Error::AxisParallel("the initial polarization"));
    }
    if vec3::norm(&pf) <= tol {
        return Err(Error::AxisParallel("the target pole"));
    }
    let cos = vec3::dot(&p0, &pf);
    let sin = vec3::dot(&vec3::cross(&l, &p0), &pf);
    let omega = sin.atan2(cos);
    Ok(if omega >= -tol {
        omega.max(T::zero())
    } else {
        omega + T::TAU()
    })
}

/// `cos ω_tot` from the closed form in `K`, valid when the phases are
/// matched. Numerator and denominator are multiplied by `sin²(φ/2)` so φ = 0
/// is regular; θ = 0 is not.
pub fn cos_total_angle_closed_form<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> T {
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let (sp, cp) = (phases.phi * half).sin_cos();
    let (s2b, c2b) = (geom.beta + geom.beta).sin_cos();
    let th = phases.theta * half;
    let ks = th.cos() / th.sin() / s2b * sp - cp * c2b / s2b;
    let (s20, c20) = (init.theta0 + init.theta0).sin_cos();
    let (sd, cd) = init.delta.sin_cos();
    let num = -ks * s20 * (cp * cd + sp * sd) - c20;
    let den = two * ks * ks + T::one() + two * ks * (ks * c20 - s20 * sd * sp - s20 * cd * cp);
    num / den
}

fn probability_at<T: Real>(rot: &AxisAngle<T>, r0: &PolarizationVector<T>, j: u64) -> T {
    let omega = T::from_u64(j).unwrap() * rot.alpha();
    success_probability(&rot.rotate(r0, omega))
}

/// Best measurement step near `ω_tot/α`.
///
/// `j_op` is the argmax of the success probability over the nearest integer
/// to `ω_tot/α` (half-integers round up) and its two neighbours; ties go to
/// the smaller step.
pub fn optimal_iterations<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> Result<IterationPlan<T>> {
    let rot = rotation_axis_angle(geom, phases);
    let alpha = rot.alpha();
    if alpha <= T::tolerances().unitarity {
        return Err(Error::NoProgress);
    }
    let omega_tot = total_angle(geom, init, phases)?;
    let ratio = omega_tot / alpha;
    let nearest = (ratio + lit(0.5)).floor().to_u64().unwrap_or(0);
    let r0 = init.polarization();

    let lo = nearest.saturating_sub(1);
    let mut j_op = lo;
    let mut best = probability_at(&rot, &r0, lo);
    for j in lo + 1..=nearest + 1 {
        let p = probability_at(&rot, &r0, j);
        if p > best {
            best = p;
            j_op = j;
        }
    }
    Ok(IterationPlan {
        omega_tot,
        alpha,
        ratio,
        j_op,
        p_at_jop: best,
        p_at_jop_plus_1: probability_at(&rot, &r0, j_op + 1),
        p_at_jop_minus_1: j_op.checked_sub(1).map(|j| probability_at(&rot, &r0, j)),
        k_param: k_param(geom, phases),
    })
}

/// `sin²((2j+1)β)`: standard Grover from `U|γ⟩` with θ = φ = π.
pub fn grover_probability<T: Real>(geom: &SearchGeometry<T>, j: u64) -> T {
    let k = T::from_u64(2 * j + 1).unwrap();
    let s = (k * geom.beta).sin();
    s * s
}

/// Success probability after `0..=j_max` iterations.
pub fn probability_trajectory<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
    j_max: u64,
) -> Vec<T> {
    let rot = rotation_axis_angle(geom, phases);
    let r0 = init.polarization();
    (0..=j_max).map(|j| probability_at(&rot, &r0, j)).collect()
}

/// Integer rounding for Høyer's step count `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Nearest integer, halves rounded up.
    Nearest,
    /// `⌊x⌋ + 1`.
    #[default]
    FloorPlusOne,
}

/// Høyer's prepared initial state `sin θ_init|1⟩ + cos θ_init e^{iu}|2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoyerPrep<T> {
    /// `π/2 − m·ϑ`; slightly negative when `m·ϑ` overshoots.
    pub theta_init: T,
    pub m: u64,
    pub vartheta: T,
    pub u: T,
    /// `(θ, hoyer_phi(θ, sin²β))`.
    pub phases: PhasePair<T>,
}

impl<T: Real> HoyerPrep<T> {
    /// Canonical form of the prepared state.
    pub fn initial_state(&self) -> InitialState2D<T> {
        InitialState2D::canonical(self.theta_init, self.u).expect("finite angles")
    }
}

pub fn hoyer_preparation<T: Real>(
    geom: &SearchGeometry<T>,
    theta: T,
    rounding: Rounding,
) -> Result<HoyerPrep<T>> {
    let half = lit::<T>(0.5);
    let x = ((theta * half).sin() * (geom.beta + geom.beta).sin()).abs();
    if x <= T::epsilon() {
        return Err(Error::DegenerateSearch("ϑ = 0: sin(θ/2)·sin 2β vanishes".into()));
    }
    let vartheta = x.min(T::one()).asin();
    let ratio = (T::FRAC_PI_2() - geom.beta) / vartheta;
    let m = match rounding {
        Rounding::Nearest => (ratio + half).floor(),
        Rounding::FloorPlusOne => ratio.floor() + T::one(),
    };
    let theta_init = T::FRAC_PI_2() - m * vartheta;
    let phi = hoyer_phi(theta, geom.weight())?;
    let phases = PhasePair::new(theta, phi)?;
    let q = build_search_operator(geom, &phases);
    let u = canonical_angle(-(q.m[0][1].arg() - q.m[1][1].arg()));
    Ok(HoyerPrep {
        theta_init,
        m: m.to_u64().unwrap_or(0),
        vartheta,
        u,
        phases,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertaintySolution<T> {
    pub phases: PhasePair<T>,
    pub iterations: u64,
    /// Normalized phase-matching residual at the solution.
    pub residual_match: T,
    /// `ω_tot/α − J` at the solution.
    pub residual_count: T,
    /// Number of distinct roots found on (0, π].
    pub roots_found: usize,
}

const CERTAINTY_GRID: usize = 256;

fn count_mismatch<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    theta: T,
    target: T,
) -> Option<T> {
    let phases = solve_phi(geom, init, theta).ok()?;
    let alpha = step_angle(geom, &phases);
    if alpha <= T::tolerances().unitarity {
        return None;
    }
    let omega = total_angle(geom, init, &phases).ok()?;
    Some(omega / alpha - target)
}

/// Bisection on a sign-changing bracket down to `tol` in the argument.
fn bisect<T: Real>(f: impl Fn(T) -> Option<T>, mut lo: T, mut hi: T, f_lo: T, tol: T) -> Option<T> {
    let mut lo_neg = f_lo < T::zero();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * lit(0.5);
        let fm = f(mid)?;
        if fm == T::zero() {
            return Some(mid);
        }
        if (fm < T::zero()) == lo_neg {
            lo = mid;
            lo_neg = fm < T::zero();
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) * lit(0.5))
}

/// Phases that reach the marked state with certainty after exactly
/// `iterations` steps: θ solves `ω_tot(θ, φ(θ))/α(θ, φ(θ)) = J` with φ(θ)
/// from the matching condition. Among several roots on (0, π] the one closest
/// to θ = π is returned.
pub fn certainty_search<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    iterations: u64,
) -> Result<CertaintySolution<T>> {
    certainty_search_near(geom, init, iterations, T::PI())
}

/// [`certainty_search`] preferring the root closest to `baseline_theta`.
pub fn certainty_search_near<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    iterations: u64,
    baseline_theta: T,
) -> Result<CertaintySolution<T>> {
    let target = T::from_u64(iterations).unwrap();
    let f = |theta: T| count_mismatch(geom, init, theta, target);
    let step = T::PI() / T::from_usize(CERTAINTY_GRID).unwrap();
    let grid: Vec<(T, Option<T>)> = (1..=CERTAINTY_GRID)
        .map(|k| {
            let theta = step * T::from_usize(k).unwrap();
            (theta, f(theta))
        })
        .collect();

    let accept = lit::<T>(1e-8);
    let theta_tol = lit::<T>(1e-13);
    let mut roots: Vec<T> = Vec::new();
    let push = |r: T, roots: &mut Vec<T>| {
        if roots.iter().all(|&x| (x - r).abs() > lit(1e-9)) {
            roots.push(r);
        }
    };
    for (theta, val) in &grid {
        if let Some(v) = val {
            if v.abs() <= T::tolerances().residual {
                push(*theta, &mut roots);
            }
        }
    }
    for w in grid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let (Some(fa), Some(fb)) = (fa, fb) else { continue };
        if (fa < T::zero()) == (fb < T::zero()) {
            continue;
        }
        if let Some(root) = bisect(f, a, b, fa, theta_tol) {
            if f(root).is_some_and(|v| v.abs() <= accept) {
                push(root, &mut roots);
            }
        }
    }

    let theta = roots
        .iter()
        .copied()
        .min_by(|a, b| {
            let da = (*a - baseline_theta).abs();
            let db = (*b - baseline_theta).abs();
            da.partial_cmp(&db).unwrap()
        })
        .ok_or(Error::InfeasibleIterations { iterations })?;
    let phases = solve_phi(geom, init, theta)?;
    let residual_match = matching_residual(geom, init, &phases)?.normalized;
    let residual_count = f(theta).ok_or(Error::InfeasibleIterations { iterations })?;
    Ok(CertaintySolution {
        phases,
        iterations,
        residual_match,
        residual_count,
        roots_found: roots.len(),
    })
}

/// Largest success probability on the circle the polarization sweeps,
/// `(1 + z_max)/2`, regardless of whether an integer step lands there.
pub fn peak_probability<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    phases: &PhasePair<T>,
) -> T {
    let r0 = init.polarization();
    let rot = match rotation_axis_angle(geom, phases) {
        AxisAngle::Identity => return success_probability(&r0),
        AxisAngle::Rotation(r) => r,
    };
    let c = vec3::dot(&rot.axis, &r0.to_array()).max(-T::one()).min(T::one());
    let nz = rot.axis[2].max(-T::one()).min(T::one());
    let z = c * nz + (T::one() - c * c).sqrt() * (T::one() - nz * nz).sqrt();
    (T::one() + z.min(T::one())) * lit(0.5)
}

/// Half-widths of the φ window around the matched phase inside which
/// [`peak_probability`] stays at or above ½.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MismatchTolerance<T> {
    /// Matched φ at the scanned θ.
    pub phi_matched: T,
    pub plus: T,
    pub minus: T,
    /// Mean of `plus` and `minus`.
    pub half_width: T,
}

const MISMATCH_GRID: usize = 1024;

pub fn mismatch_tolerance<T: Real>(
    geom: &SearchGeometry<T>,
    init: &InitialState2D<T>,
    theta: T,
) -> Result<MismatchTolerance<T>> {
    let matched = solve_phi(geom, init, theta)?;
    let half = lit::<T>(0.5);
    let width = |sign: T| -> Result<T> {
        let g = |d: T| {
            let phases = PhasePair {
                theta: matched.theta,
                phi: matched.phi + sign * d,
            };
            peak_probability(geom, init, &phases) - half
        };
        let step = T::PI() / T::from_usize(MISMATCH_GRID).unwrap();
        let mut lo = T::zero();
        for k in 1..=MISMATCH_GRID {
            let hi = step * T::from_usize(k).unwrap();
            if g(hi) < T::zero() {
                let mut a = lo;
                let mut b = hi;
                while b - a > lit(1e-14) {
                    let mid = (a + b) * half;
                    if g(mid) < T::zero() {
                        b = mid;
                    } else {
                        a = mid;
                    }
                    if mid == a && mid == b {
                        break;
                    }
                }
                return Ok((a + b) * half);
            }
            lo = hi;
        }
        Err(Error::NoSolution)
    };
    let plus = width(T::one())?;
    let minus = width(-T::one())?;
    Ok(MismatchTolerance {
        phi_matched: matched.phi,
        plus,
        minus,
        half_width: (plus + minus) * half,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope<T: Real>(points: &[(T, T)]) -> Result<T> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > T::zero() && y > T::zero())) {
        return Err(Error::InvalidInput("slope fit needs two or more positive points".into()));
    }
    let n = T::from_usize(points.len()).unwrap();
    let (sx, sy) = points
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    if sxx <= T::zero() {
        return Err(Error::InvalidInput("slope fit needs distinct x values".into()));
    }
    Ok(sxy / sxx)
}
