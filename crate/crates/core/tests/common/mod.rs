#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex;
use phasematch::oracle::{self, column_reflector, MarkedSet, UnitarySpec};
use phasematch::{EngineConfig, InitialState2D, PhasePair, SearchGeometry, Su2Matrix};
use rand::Rng;

/// Real unitary of size `n` whose column 0 has marked weight `sin²β`, spread
/// evenly over `marked`.
pub fn engine_with_beta(beta: f64, n: usize, marked: &[usize]) -> (UnitarySpec<f64>, MarkedSet) {
    let set = MarkedSet::new(marked.iter().copied(), n).unwrap();
    let k = marked.len() as f64;
    let (s, c) = beta.sin_cos();
    let v: Vec<f64> = (0..n)
        .map(|i| {
            if set.contains(i) {
                s / k.sqrt()
            } else {
                c / ((n as f64) - k).sqrt()
            }
        })
        .collect();
    (UnitarySpec::explicit(column_reflector(&v).unwrap()), set)
}

/// `count` distinct indices below `n`.
pub fn random_marked<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.random_range(0..n);
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

pub fn random_phases<R: Rng>(rng: &mut R) -> PhasePair<f64> {
    PhasePair::new(rng.random_range(-PI..PI), rng.random_range(-PI..PI)).unwrap()
}

pub fn random_init<R: Rng>(rng: &mut R) -> InitialState2D<f64> {
    InitialState2D::new(rng.random_range(0.0..FRAC_PI_2 - 0.05), rng.random_range(-PI..PI)).unwrap()
}

/// Marked probability after `0..=j_max` oracle steps from `init` (or `U|0⟩`).
pub fn oracle_trajectory(
    spec: &UnitarySpec<f64>,
    marked: &MarkedSet,
    phases: PhasePair<f64>,
    init: Option<&InitialState2D<f64>>,
    j_max: u64,
) -> Vec<f64> {
    let cfg = EngineConfig::new(spec, marked.clone(), phases).unwrap();
    engine_trajectory(&cfg, init, j_max)
}

pub fn engine_trajectory(cfg: &EngineConfig<f64>, init: Option<&InitialState2D<f64>>, j_max: u64) -> Vec<f64> {
    let psi = cfg.initial_state(init).unwrap();
    oracle::simulate_probabilities(&psi, cfg, j_max).unwrap()
}

/// Random SU(2)·U(1) element from a random unit quaternion and phase.
pub fn random_su2<R: Rng>(rng: &mut R) -> Su2Matrix<f64> {
    let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    let g = Complex::cis(rng.random_range(-PI..PI));
    Su2Matrix::new([
        [Complex::new(a, d) * g, Complex::new(c, b) * g],
        [Complex::new(-c, b) * g, Complex::new(a, -d) * g],
    ])
}

pub fn geom(beta: f64) -> SearchGeometry<f64> {
    SearchGeometry::new(beta).unwrap()
}
