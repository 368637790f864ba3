mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use phasematch::matching::{classify_special_case, SpecialCase};
use phasematch::{
    canonical_angle, hoyer_preparation, matching_residual, rotation_axis_angle, solve_phi, AxisAngle,
    InitialState2D, PhasePair, PolarizationVector, Rounding, SearchGeometry,
};
use proptest::prelude::*;

fn beta() -> impl Strategy<Value = f64> {
    0.01..FRAC_PI_2 - 0.01
}

fn init() -> impl Strategy<Value = InitialState2D<f64>> {
    (0.0..FRAC_PI_2 - 0.01, -PI..PI).prop_map(|(t, d)| InitialState2D::new(t, d).unwrap())
}

/// `(r⃗_f − r⃗₀)·l̂` from the polarization picture alone.
fn geometric_gap(g: &SearchGeometry<f64>, init: &InitialState2D<f64>, phases: &PhasePair<f64>) -> Option<f64> {
    let AxisAngle::Rotation(rot) = rotation_axis_angle(g, phases) else {
        return None;
    };
    let r0 = init.polarization().to_array();
    let rf = PolarizationVector::<f64>::target().to_array();
    Some((0..3).map(|k| (rf[k] - r0[k]) * rot.axis[k]).sum())
}

proptest! {
    #[test]
    fn solved_phi_zeroes_residual(b in beta(), i in init(), t in -PI..PI) {
        let g = common::geom(b);
        let phases = solve_phi(&g, &i, t).unwrap();
        prop_assert!(matching_residual(&g, &i, &phases).unwrap().value.abs() <= 1e-12);
    }

    #[test]
    fn equal_phase_reduction(b in beta(), t in -PI..PI) {
        let g = common::geom(b);
        let i = InitialState2D::standard(&g);
        let phases = solve_phi(&g, &i, t).unwrap();
        prop_assert!(canonical_angle(phases.phi - t).abs() <= 1e-12);
        prop_assert_eq!(classify_special_case(&g, &i, &phases), SpecialCase::EqualPhases);
    }

    #[test]
    fn hoyer_state_solves_to_hoyer_phi(b in 0.01..0.7f64, t in 0.1..PI) {
        let g = common::geom(b);
        let prep = hoyer_preparation(&g, t, Rounding::FloorPlusOne).unwrap();
        let solved = solve_phi(&g, &prep.initial_state(), t).unwrap();
        prop_assert!(canonical_angle(solved.phi - prep.phases.phi).abs() <= 1e-10);
    }

    #[test]
    fn geometric_condition_is_equivalent(b in beta(), i in init(), t in -PI..PI, eps in 0.01..1.0f64) {
        let g = common::geom(b);
        let matched = solve_phi(&g, &i, t).unwrap();
        if let Some(gap) = geometric_gap(&g, &i, &matched) {
            prop_assert!(gap.abs() <= 1e-10);
        }
        let off = PhasePair::new(t, matched.phi + eps).unwrap();
        let res = matching_residual(&g, &i, &off).unwrap();
        if let Some(gap) = geometric_gap(&g, &i, &off) {
            prop_assert_eq!(gap.abs() <= 1e-10, res.value.abs() <= 1e-10);
        }
    }
}
