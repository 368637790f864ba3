use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::fwht::{fwht, hadamard_entry};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest dimension allowed for dense (explicit or random) unitaries.
pub const MAX_DENSE_DIM: usize = 4096;
/// Largest dimension allowed for the fast Hadamard–Walsh path.
pub const MAX_HADAMARD_DIM: usize = 1 << 24;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn from_rows(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex<T>]> {
        self.data.chunks_exact(self.n)
    }

    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.rows()
            .map(|row| row.iter().zip(x).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `M† x`, without forming the adjoint.
    pub fn adjoint_mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.n];
        for (row, xi) in self.rows().zip(x) {
            for (o, m) in out.iter_mut().zip(row) {
                *o += m.conj() * xi;
            }
        }
        out
    }

    /// `max |(MM† − I)ᵢⱼ|`; for square `M` this vanishes iff `M†M = I`.
    pub fn unitarity_deviation(&self) -> T {
        let rows: Vec<&[Complex<T>]> = self.rows().collect();
        let mut worst = T::zero();
        for (i, ri) in rows.iter().enumerate() {
            for (j, rj) in rows.iter().enumerate().skip(i) {
                let mut acc = ri
                    .iter()
                    .zip(rj.iter())
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj());
                if i == j {
                    acc -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryKind {
    HadamardWalsh,
    SeededRandom,
    Explicit,
}

/// Recipe for the unitary `U` of the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarySpec<T> {
    pub kind: UnitaryKind,
    pub n: usize,
    pub seed: Option<u64>,
    pub matrix: Option<DenseMatrix<T>>,
}

impl<T: Real> UnitarySpec<T> {
    pub fn hadamard_walsh(n: usize) -> Self {
        Self {
            kind: UnitaryKind::HadamardWalsh,
            n,
            seed: None,
            matrix: None,
        }
    }

    pub fn seeded_random(n: usize, seed: u64) -> Self {
        Self {
            kind: UnitaryKind::SeededRandom,
            n,
            seed: Some(seed),
            matrix: None,
        }
    }

    pub fn explicit(matrix: DenseMatrix<T>) -> Self {
        Self {
            kind: UnitaryKind::Explicit,
            n: matrix.dim(),
            seed: None,
            matrix: Some(matrix),
        }
    }
}

/// A built unitary, either the implicit Hadamard–Walsh transform or a dense
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Unitary<T> {
    HadamardWalsh { n: usize },
    Dense(DenseMatrix<T>),
}

impl<T: Real> Unitary<T> {
    pub fn dim(&self) -> usize {
        match self {
            Unitary::HadamardWalsh { n } => *n,
            Unitary::Dense(m) => m.dim(),
        }
    }

    /// Column `j`, i.e. `U|j⟩`.
    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        match self {
            Unitary::HadamardWalsh { n } => (0..*n)
                .map(|i| Complex::new(hadamard_entry(*n, i, j), T::zero()))
                .collect(),
            Unitary::Dense(m) => (0..m.dim()).map(|i| m.get(i, j)).collect(),
        }
    }

    pub fn apply(&self, x: &mut Vec<Complex<T>>) {
        match self {
            Unitary::HadamardWalsh { .. } => fwht(x),
            Unitary::Dense(m) => *x = m.mul_vec(x),
        }
    }

    /// `U⁻¹ x` computed as `U† x`.
    pub fn apply_adjoint(&self, x: &mut Vec<Complex<T>>) {
        match self {
            Unitary::HadamardWalsh { .. } => fwht(x),
            Unitary::Dense(m) => *x = m.adjoint_mul_vec(x),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        match self {
            Unitary::Dense(m) => m.clone(),
            Unitary::HadamardWalsh { n } => {
                let n = *n;
                let data = (0..n * n)
                    .map(|k| Complex::new(hadamard_entry(n, k / n, k % n), T::zero()))
                    .collect();
                DenseMatrix { n, data }
            }
        }
    }
}

fn check_dense_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_DIM {
        return Err(Error::InvalidInput(format!(
            "dense unitary dimension {n} outside 1..={MAX_DENSE_DIM}"
        )));
    }
    Ok(())
}

pub fn build_unitary<T: Real>(spec: &UnitarySpec<T>) -> Result<Unitary<T>> {
    match spec.kind {
        UnitaryKind::HadamardWalsh => {
            let n = spec.n;
            if n < 2 || !n.is_power_of_two() || n > MAX_HADAMARD_DIM {
                return Err(Error::InvalidInput(format!(
                    "Hadamard–Walsh dimension {n} must be a power of two in 2..={MAX_HADAMARD_DIM}"
                )));
            }
            Ok(Unitary::HadamardWalsh { n })
        }
        UnitaryKind::SeededRandom => {
            check_dense_dim(spec.n)?;
            Ok(Unitary::Dense(seeded_random_unitary(spec.n, spec.seed.unwrap_or(0))))
        }
        UnitaryKind::Explicit => {
            let m = spec
                .matrix
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("explicit unitary without a matrix".into()))?;
            check_dense_dim(m.dim())?;
            if m.dim() != spec.n {
                return Err(Error::DimensionMismatch {
                    expected: spec.n,
                    got: m.dim(),
                });
            }
            let deviation = m.unitarity_deviation();
            if !(deviation <= T::tolerances().equality) {
                return Err(Error::NotUnitary {
                    deviation: deviation.to_f64().unwrap_or(f64::NAN),
                });
            }
            Ok(Unitary::Dense(m.clone()))
        }
    }
}

/// Haar-like random unitary from a seeded complex Gaussian matrix.
///
/// Entries are drawn row-major from ChaCha8 seeded with `seed`, real part
/// then imaginary part, each standard normal in `f64`. Columns are then
/// orthonormalized left to right by modified Gram–Schmidt with one
/// re-orthogonalization pass.
pub fn seeded_random_unitary<T: Real>(n: usize, seed: u64) -> DenseMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex<f64>>> = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for col in cols.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            col[i] = Complex::new(re, im);
        }
    }
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let proj: Complex<f64> = q.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                for (v, qi) in rest[0].iter_mut().zip(q) {
                    *v -= proj * qi;
                }
            }
        }
        let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    let data = (0..n * n)
        .map(|k| {
            let v = cols[k % n][k / n];
            Complex::new(T::from_f64(v.re).unwrap(), T::from_f64(v.im).unwrap())
        })
        .collect();
    DenseMatrix { n, data }
}

/// Real Householder reflection exchanging `|0⟩` and the unit vector `v`, so
/// column 0 is `v`. Identity when `v = |0⟩`.
pub fn column_reflector<T: Real>(v: &[T]) -> Result<DenseMatrix<T>> {
    let n = v.len();
    check_dense_dim(n)?;
    let norm_sq = v.iter().fold(T::zero(), |acc, &x| acc + x * x);
    if !((norm_sq - T::one()).abs() <= T::tolerances().unitarity) {
        return Err(Error::NotNormalized {
            norm_sq: norm_sq.to_f64().unwrap_or(f64::NAN),
        });
    }
    // w = e₀ − v, H = I − 2ww/|w|², with |w|² = 2(1 − v₀) for unit v
    let w: Vec<T> = v
        .iter()
        .enumerate()
        .map(|(i, &x)| if i == 0 { T::one() - x } else { -x })
        .collect();
    let two = T::one() + T::one();
    let wn2 = two * w[0];
    if wn2 <= T::epsilon() {
        return Ok(DenseMatrix::identity(n));
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { T::one() } else { T::zero() };
            data.push(Complex::new(delta - two * w[i] * w[j] / wn2, T::zero()));
        }
    }
    Ok(DenseMatrix { n, data })
}

/// [`column_reflector`] onto the uniform superposition: a Hadamard-like
/// unitary for any `n ≥ 2`.
pub fn uniform_reflector<T: Real>(n: usize) -> Result<DenseMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("uniform reflector needs n >= 2, got {n}")));
    }
    let u = T::one() / T::from_usize(n).unwrap().sqrt();
    column_reflector(&vec![u; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_first_column_uniform() {
        let u = build_unitary(&UnitarySpec::<f64>::hadamard_walsh(4)).unwrap();
        assert!(u.column(0).iter().all(|v| (v.re - 0.5).abs() < 1e-16 && v.im == 0.0));
        let mut e0 = vec![Complex::new(0.0, 0.0); 4];
        e0[0] = Complex::new(1.0, 0.0);
        u.apply(&mut e0);
        assert!(e0.iter().all(|v| (v.re - 0.5).abs() < 1e-16));
        assert!(u.to_dense().unitarity_deviation() < 1e-15);
    }

    #[test]
    fn explicit_identity_and_rejection() {
        let id = build_unitary(&UnitarySpec::explicit(DenseMatrix::<f64>::identity(5))).unwrap();
        assert_eq!(id, Unitary::Dense(DenseMatrix::identity(5)));
        let mut bad = DenseMatrix::<f64>::identity(3);
        bad.data[1] = Complex::new(0.5, 0.0);
        assert!(matches!(build_unitary(&UnitarySpec::explicit(bad)), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn seeded_random_is_unitary_and_deterministic() {
        let a = build_unitary(&UnitarySpec::<f64>::seeded_random(8, 42)).unwrap();
        let b = build_unitary(&UnitarySpec::<f64>::seeded_random(8, 42)).unwrap();
        let c = build_unitary(&UnitarySpec::<f64>::seeded_random(8, 43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.to_dense().unitarity_deviation() < 1e-10);
    }

    #[test]
    fn reflector_maps_zero_to_uniform() {
        let m = uniform_reflector::<f64>(400).unwrap();
        assert!(m.unitarity_deviation() < 1e-12);
        let u = 1.0 / 20.0;
        for i in 0..400 {
            assert!((m.get(i, 0).re - u).abs() < 1e-15);
        }
    }

    #[test]
    fn reflector_first_column() {
        let b = 0.2f64;
        let m = column_reflector(&[b.sin(), 0.0, b.cos()]).unwrap();
        assert!(m.unitarity_deviation() < 1e-15);
        assert!((m.get(0, 0).re - b.sin()).abs() < 1e-16 && (m.get(2, 0).re - b.cos()).abs() < 1e-16);
        assert_eq!(column_reflector(&[1.0, 0.0]).unwrap(), DenseMatrix::identity(2));
        assert!(column_reflector(&[0.5, 0.5]).is_err());
        assert!(uniform_reflector::<f64>(1).is_err());
    }

    #[test]
    fn dimension_guards() {
        assert!(build_unitary(&UnitarySpec::<f64>::hadamard_walsh(6)).is_err());
        assert!(build_unitary(&UnitarySpec::<f64>::seeded_random(MAX_DENSE_DIM + 1, 0)).is_err());
    }

    #[test]
    fn adjoint_inverts() {
        let u = build_unitary(&UnitarySpec::<f64>::seeded_random(6, 7)).unwrap();
        let x: Vec<Complex<f64>> = (0..6).map(|k| Complex::new(k as f64, 1.0)).collect();
        let mut y = x.clone();
        u.apply(&mut y);
        u.apply_adjoint(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
