mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use phasematch::oracle::{
    apply_iteration, beta_of, initial_state, marked_probability, project_to_2d, IterationPath,
    MarkedSet, UnitarySpec,
};
use phasematch::{
    build_search_operator, probability_trajectory, EngineConfig, InitialState2D, PhasePair,
};
use proptest::prelude::*;

fn setup() -> impl Strategy<Value = (UnitarySpec<f64>, Vec<usize>)> {
    (2u32..7, any::<u64>(), any::<bool>()).prop_flat_map(|(k, seed, hadamard)| {
        let n = 1usize << k;
        let spec = if hadamard {
            UnitarySpec::hadamard_walsh(n)
        } else {
            UnitarySpec::seeded_random(n, seed)
        };
        (Just(spec), proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=3.min(n - 1)))
    })
}

fn phase_list(len: usize) -> impl Strategy<Value = Vec<PhasePair<f64>>> {
    proptest::collection::vec((-PI..PI, -PI..PI), len)
        .prop_map(|v| v.into_iter().map(|(t, p)| PhasePair::new(t, p).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_and_subspace_preserved((spec, marked) in setup(), steps in phase_list(12)) {
        let set = MarkedSet::new(marked, spec.n).unwrap();
        let cfg = EngineConfig::new(&spec, set.clone(), steps[0]).unwrap();
        let sub = cfg.subspace().unwrap();
        let mut psi = initial_state(&spec, &set, None).unwrap();
        for ph in steps {
            psi = apply_iteration(&psi, &cfg.clone().with_phases(ph)).unwrap();
            prop_assert!((psi.norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert!(project_to_2d(&psi, &sub).unwrap().leakage <= 1e-10);
        }
    }

    #[test]
    fn oracle_restricts_to_two_level_power(
        (spec, marked) in setup(),
        ph in (-PI..PI, -PI..PI),
        init in (0.0..FRAC_PI_2, -PI..PI),
        j_max in 1u64..20,
    ) {
        let set = MarkedSet::new(marked, spec.n).unwrap();
        let phases = PhasePair::new(ph.0, ph.1).unwrap();
        let cfg = EngineConfig::new(&spec, set.clone(), phases).unwrap();
        let sub = cfg.subspace().unwrap();
        let init = InitialState2D::new(init.0, init.1).unwrap();
        let q = build_search_operator(&sub.geometry, &phases);
        let mut psi = sub.embed(&init.state());
        for j in 1..=j_max {
            psi = apply_iteration(&psi, &cfg).unwrap();
            let got = project_to_2d(&psi, &sub).unwrap();
            let want = q.pow(j).apply(&init.state());
            prop_assert!((got.amp1 - want.amp1).norm() <= 1e-10);
            prop_assert!((got.amp2 - want.amp2).norm() <= 1e-10);
        }
    }

    #[test]
    fn beta_of_drives_analytic_engine((spec, marked) in setup(), ph in (-PI..PI, -PI..PI)) {
        let set = MarkedSet::new(marked, spec.n).unwrap();
        let g = beta_of(&spec, &set).unwrap();
        let phases = PhasePair::new(ph.0, ph.1).unwrap();
        let analytic = probability_trajectory(&g, &InitialState2D::standard(&g), &phases, 32);
        let oracle = common::oracle_trajectory(&spec, &set, phases, None, 32);
        for (a, o) in analytic.iter().zip(&oracle) {
            prop_assert!((a - o).abs() <= 1e-10);
        }
    }

    #[test]
    fn both_iteration_paths_agree((spec, marked) in setup(), ph in (-PI..PI, -PI..PI)) {
        let set = MarkedSet::new(marked, spec.n).unwrap();
        let cfg = EngineConfig::new(&spec, set.clone(), PhasePair::new(ph.0, ph.1).unwrap()).unwrap();
        let slow = cfg.clone().with_path(IterationPath::Conjugation);
        let mut a = initial_state(&spec, &set, None).unwrap();
        let mut b = a.clone();
        for _ in 0..8 {
            a = apply_iteration(&a, &cfg).unwrap();
            b = apply_iteration(&b, &slow).unwrap();
        }
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            prop_assert!((x - y).norm() <= 1e-12);
        }
        prop_assert!((marked_probability(&a, &set) - marked_probability(&b, &set)).abs() <= 1e-12);
    }
}

#[test]
fn grover_1024_matches_closed_form() {
    let spec = UnitarySpec::hadamard_walsh(1024);
    let set = MarkedSet::new([700], 1024).unwrap();
    let b = (1.0f64 / 32.0).asin();
    let p = common::oracle_trajectory(&spec, &set, PhasePair::grover(), None, 40);
    for (j, pj) in p.iter().enumerate() {
        assert!((pj - ((2 * j + 1) as f64 * b).sin().powi(2)).abs() <= 1e-10);
    }
}
