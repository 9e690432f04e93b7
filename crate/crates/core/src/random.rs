//! Seeded random matrices and states.

use nalgebra::linalg::QR;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::{Matrix, Vector};

/// Generator for stream `index` derived from a base seed.
///
/// Streams are independent of each other and of scheduling, so restart `k`
/// always sees the same numbers for a given base seed.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vector {
    Vector::from_fn(len, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    let qr = QR::new(ginibre(d, d, rng));
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Invertible matrix `U diag(s) V` with singular values drawn uniformly in `[lo, hi]`.
pub fn conditioned_invertible<R: Rng + ?Sized>(d: usize, lo: f64, hi: f64, rng: &mut R) -> Matrix {
    let u = haar_unitary(d, rng);
    let v = haar_unitary(d, rng);
    let s = Matrix::from_diagonal(&Vector::from_fn(d, |_, _| {
        Complex64::new(rng.random_range(lo..=hi), 0.0)
    }));
    u * s * v
}

/// Haar-random unit vector.
pub fn haar_state<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vector {
    let v = gaussian_vector(len, rng);
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Full-rank density matrix `Q diag(p) Q†` with Haar `Q` and flat-Dirichlet weights.
pub fn full_rank_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let q = haar_unitary(n, rng);
    let mut p: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    let d = Matrix::from_diagonal(&Vector::from_iterator(n, p.iter().map(|&x| Complex64::new(x, 0.0))));
    let rho = &q * d * q.adjoint();
    (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_error;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, 3).random();
        let b: u64 = stream(7, 3).random();
        let c: u64 = stream(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = stream(1, 0);
        for d in 1..6 {
            assert!(unitarity_error(&haar_unitary(d, &mut rng)) < 1e-12);
        }
    }

    #[test]
    fn conditioned_singular_values() {
        let mut rng = stream(2, 0);
        let m = conditioned_invertible(4, 0.5, 2.0, &mut rng);
        let sv = crate::linalg::singular_values(&m).unwrap();
        assert!(sv[0] <= 2.0 + 1e-12 && sv[3] >= 0.5 - 1e-12);
    }
}
