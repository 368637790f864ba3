//! Brute-force state-vector simulation of `Q = −U I_γ U⁻¹ I_τ` in the full
//! N-dimensional space. Used as the independent check for every result of
//! the two-level analysis.

mod fwht;
mod unitary;

pub use fwht::{fwht, hadamard_entry};
pub use unitary::{
    build_unitary, column_reflector, seeded_random_unitary, uniform_reflector, DenseMatrix, Unitary, UnitaryKind,
    UnitarySpec, MAX_DENSE_DIM, MAX_HADAMARD_DIM,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{InitialState2D, PhasePair, SearchGeometry, TwoDimState};
use crate::scalar::Real;

/// Normalized amplitudes over `N` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let s = Self { amplitudes };
        let n = s.norm_sqr();
        if !n.is_finite() || (n - T::one()).abs() > T::tolerances().unitarity {
            return Err(Error::NotNormalized {
                norm_sq: n.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(s)
    }

    /// Basis state `|k⟩`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); n];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }
}

/// Marked basis indices τₖ, sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSet {
    indices: Vec<usize>,
}

impl MarkedSet {
    pub fn new(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        if indices.is_empty() {
            return Err(Error::InvalidInput("marked set is empty".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("marked set has duplicate indices".into()));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::InvalidInput(format!("marked index {last} out of range for N = {n}")));
            }
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.binary_search(&k).is_ok()
    }
}

/// How `U I_γ U⁻¹` is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IterationPath {
    /// `I + (e^{iθ} − 1)|u⟩⟨u|` with `|u⟩ = U|γ⟩`; O(N) per step.
    #[default]
    RankOne,
    /// Explicit `U`, phase on `|γ⟩`, `U†`: O(N log N) for Hadamard–Walsh,
    /// O(N²) for dense matrices.
    Conjugation,
}

/// A fully specified search engine.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig<T> {
    pub unitary: Unitary<T>,
    pub marked: MarkedSet,
    pub phases: PhasePair<T>,
    pub gamma_index: usize,
    pub path: IterationPath,
    reference: Vec<Complex<T>>,
}

impl<T: Real> EngineConfig<T> {
    pub fn new(spec: &UnitarySpec<T>, marked: MarkedSet, phases: PhasePair<T>) -> Result<Self> {
        Self::with_unitary(build_unitary(spec)?, marked, phases, 0)
    }

    pub fn with_unitary(unitary: Unitary<T>, marked: MarkedSet, phases: PhasePair<T>, gamma_index: usize) -> Result<Self> {
        let n = unitary.dim();
        if gamma_index >= n {
            return Err(Error::InvalidInput(format!("γ index {gamma_index} out of range for N = {n}")));
        }
        if let Some(&last) = marked.indices().last() {
            if last >= n {
                return Err(Error::DimensionMismatch { expected: n, got: last + 1 });
            }
        }
        let reference = unitary.column(gamma_index);
        Ok(Self {
            unitary,
            marked,
            phases,
            gamma_index,
            path: IterationPath::default(),
            reference,
        })
    }

    pub fn with_phases(mut self, phases: PhasePair<T>) -> Self {
        self.phases = phases;
        self
    }

    pub fn with_path(mut self, path: IterationPath) -> Self {
        self.path = path;
        self
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    /// `U|γ⟩`.
    pub fn reference_state(&self) -> &[Complex<T>] {
        &self.reference
    }

    pub fn subspace(&self) -> Result<SearchSubspace<T>> {
        SearchSubspace::from_reference(&self.reference, &self.marked)
    }

    /// `U|γ⟩`, or `sin θ₀|1⟩ + cos θ₀ e^{iδ}|2⟩` when `init` is given.
    pub fn initial_state(&self, init: Option<&InitialState2D<T>>) -> Result<StateVector<T>> {
        Ok(match init {
            None => StateVector {
                amplitudes: self.reference.clone(),
            },
            Some(i) => self.subspace()?.embed(&i.state()),
        })
    }
}

/// Orthonormal basis `|1⟩, |2⟩` of the invariant plane: the normalized marked
/// and unmarked parts of `U|γ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSubspace<T> {
    pub geometry: SearchGeometry<T>,
    pub marked_part: Vec<Complex<T>>,
    pub unmarked_part: Vec<Complex<T>>,
}

impl<T: Real> SearchSubspace<T> {
    pub fn new(unitary: &Unitary<T>, marked: &MarkedSet, gamma_index: usize) -> Result<Self> {
        Self::from_reference(&unitary.column(gamma_index), marked)
    }

    fn from_reference(reference: &[Complex<T>], marked: &MarkedSet) -> Result<Self> {
        let zero = Complex::new(T::zero(), T::zero());
        let mut m = vec![zero; reference.len()];
        let mut u = reference.to_vec();
        for &k in marked.indices() {
            m[k] = reference[k];
            u[k] = zero;
        }
        let weight = m.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        let sin = weight.sqrt();
        let cos = u.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
        if sin <= T::epsilon() || cos <= T::epsilon() {
            return Err(Error::DegenerateSearch(format!(
                "marked weight of U|γ⟩ is {weight}; the search is trivial"
            )));
        }
        let geometry = SearchGeometry::new(sin.atan2(cos))?;
        for v in m.iter_mut() {
            *v /= sin;
        }
        for v in u.iter_mut() {
            *v /= cos;
        }
        Ok(Self {
            geometry,
            marked_part: m,
            unmarked_part: u,
        })
    }

    /// Embeds `amp1|1⟩ + amp2|2⟩` in the full space.
    pub fn embed(&self, s: &TwoDimState<T>) -> StateVector<T> {
        let amplitudes = self
            .marked_part
            .iter()
            .zip(&self.unmarked_part)
            .map(|(a, b)| a * s.amp1 + b * s.amp2)
            .collect();
        StateVector { amplitudes }
    }
}

/// β of the engine built from `spec` with `|γ⟩ = |0⟩`.
pub fn beta_of<T: Real>(spec: &UnitarySpec<T>, marked: &MarkedSet) -> Result<SearchGeometry<T>> {
    let u = build_unitary(spec)?;
    Ok(SearchSubspace::new(&u, marked, 0)?.geometry)
}

/// [`EngineConfig::initial_state`] with `|γ⟩ = |0⟩`.
pub fn initial_state<T: Real>(
    spec: &UnitarySpec<T>,
    marked: &MarkedSet,
    init: Option<&InitialState2D<T>>,
) -> Result<StateVector<T>> {
    let u = build_unitary(spec)?;
    let phases = PhasePair {
        theta: T::zero(),
        phi: T::zero(),
    };
    EngineConfig::with_unitary(u, marked.clone(), phases, 0)?.initial_state(init)
}

/// One application of `Q = −U I_γ U⁻¹ I_τ`.
pub fn apply_iteration<T: Real>(state: &StateVector<T>, cfg: &EngineConfig<T>) -> Result<StateVector<T>> {
    let n = cfg.dim();
    if state.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: state.len(),
        });
    }
    let e_phi = Complex::cis(cfg.phases.phi);
    let e_theta = Complex::cis(cfg.phases.theta);
    let mut x = state.amplitudes.clone();
    for &k in cfg.marked.indices() {
        x[k] *= e_phi;
    }
    match cfg.path {
        IterationPath::RankOne => {
            let u = &cfg.reference;
            let overlap: Complex<T> = u.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            let coeff = (e_theta - Complex::new(T::one(), T::zero())) * overlap;
            for (xi, ui) in x.iter_mut().zip(u) {
                *xi = -(*xi + coeff * ui);
            }
        }
        IterationPath::Conjugation => {
            cfg.unitary.apply_adjoint(&mut x);
            x[cfg.gamma_index] *= e_theta;
            cfg.unitary.apply(&mut x);
            for xi in x.iter_mut() {
                *xi = -*xi;
            }
        }
    }
    Ok(StateVector { amplitudes: x })
}

/// `Σₖ |ψ_{τₖ}|²`.
pub fn marked_probability<T: Real>(state: &StateVector<T>, marked: &MarkedSet) -> T {
    marked
        .indices()
        .iter()
        .fold(T::zero(), |acc, &k| acc + state.amplitudes[k].norm_sqr())
}

/// Components of a state along `|1⟩` and `|2⟩`, and the norm of what is left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection<T> {
    pub amp1: Complex<T>,
    pub amp2: Complex<T>,
    pub leakage: T,
}

impl<T: Real> Projection<T> {
    /// The in-plane part as a normalized two-level state.
    pub fn state(&self) -> Result<TwoDimState<T>> {
        TwoDimState::new(self.amp1, self.amp2)
    }
}

pub fn project_to_2d<T: Real>(state: &StateVector<T>, sub: &SearchSubspace<T>) -> Result<Projection<T>> {
    if state.len() != sub.marked_part.len() {
        return Err(Error::DimensionMismatch {
            expected: sub.marked_part.len(),
            got: state.len(),
        });
    }
    let inner = |basis: &[Complex<T>]| -> Complex<T> {
        basis.iter().zip(&state.amplitudes).map(|(b, s)| b.conj() * s).sum()
    };
    let amp1 = inner(&sub.marked_part);
    let amp2 = inner(&sub.unmarked_part);
    let leakage = state
        .amplitudes
        .iter()
        .zip(sub.marked_part.iter().zip(&sub.unmarked_part))
        .fold(T::zero(), |acc, (s, (m, u))| acc + (s - m * amp1 - u * amp2).norm_sqr())
        .sqrt();
    Ok(Projection { amp1, amp2, leakage })
}

/// Marked probability after each of `0..=iterations` steps from `state`.
pub fn simulate_probabilities<T: Real>(
    state: &StateVector<T>,
    cfg: &EngineConfig<T>,
    iterations: u64,
) -> Result<Vec<T>> {
    let mut s = state.clone();
    let mut out = Vec::with_capacity(iterations as usize + 1);
    out.push(marked_probability(&s, &cfg.marked));
    for _ in 0..iterations {
        s = apply_iteration(&s, cfg)?;
        out.push(marked_probability(&s, &cfg.marked));
    }
    Ok(out)
}
