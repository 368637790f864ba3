use num_complex::Complex;

use crate::scalar::Real;

/// In-place normalized Walsh–Hadamard transform, `x ← H^{⊗n} x`.
///
/// `H^{⊗n}` is real, symmetric and its own inverse. `x.len()` must be a power
/// of two.
pub fn fwht<T: Real>(x: &mut [Complex<T>]) {
    let n = x.len();
    assert!(n.is_power_of_two(), "fwht length {n} is not a power of two");
    let mut h = 1;
    while h < n {
        for block in x.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        h *= 2;
    }
    let scale = T::one() / T::from_usize(n).unwrap().sqrt();
    for v in x.iter_mut() {
        *v *= scale;
    }
}

/// Entry `(i, j)` of the normalized Hadamard–Walsh matrix of size `n`.
pub fn hadamard_entry<T: Real>(n: usize, i: usize, j: usize) -> T {
    let mag = T::one() / T::from_usize(n).unwrap().sqrt();
    if (i & j).count_ones().is_multiple_of(2) {
        mag
    } else {
        -mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_product() {
        let n = 16;
        let x: Vec<Complex<f64>> = (0..n)
            .map(|k| Complex::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let mut fast = x.clone();
        fwht(&mut fast);
        for (i, out) in fast.iter().enumerate() {
            let want: Complex<f64> = (0..n).map(|j| x[j] * hadamard_entry::<f64>(n, i, j)).sum();
            assert!((out - want).norm() < 1e-14);
        }
    }

    #[test]
    fn involution() {
        let x: Vec<Complex<f64>> = (0..64).map(|k| Complex::new(k as f64, -(k as f64) / 3.0)).collect();
        let mut y = x.clone();
        fwht(&mut y);
        fwht(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_state_to_uniform() {
        let mut x = vec![Complex::new(0.0, 0.0); 4];
        x[0] = Complex::new(1.0, 0.0);
        fwht(&mut x);
        assert!(x.iter().all(|v| (v - Complex::new(0.5, 0.0)).norm() < 1e-16));
    }
}
