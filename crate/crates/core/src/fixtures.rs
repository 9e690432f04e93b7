//! Reference states used by tests, the CLI `examples` command and the docs.

use num_complex::Complex64;

use crate::error::Result;
use crate::state::QuantumState;
use crate::tensor::{Matrix, Vector};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ket(n: usize, entries: &[(usize, f64)]) -> Vector {
    let mut v = Vector::zeros(1 << n);
    for &(i, a) in entries {
        v[i] = c(a);
    }
    v
}

/// `(|0..0> + |1..1>)/√2` on `n` qubits.
pub fn ghz(n: usize) -> Result<QuantumState> {
    let s = 0.5f64.sqrt();
    QuantumState::pure(vec![2; n], ket(n, &[(0, s), ((1 << n) - 1, s)]))
}

/// `(|100> + |010> + |001>)/√3`.
pub fn w() -> Result<QuantumState> {
    let t = 1.0 / 3f64.sqrt();
    QuantumState::pure(vec![2; 3], ket(3, &[(4, t), (2, t), (1, t)]))
}

/// `cos θ |000> + sin θ |111>`.
pub fn skewed_ghz(theta: f64) -> Result<QuantumState> {
    QuantumState::pure(vec![2; 3], ket(3, &[(0, theta.cos()), (7, theta.sin())]))
}

/// `(|000> + |001> + |110> - |111>)/2`, the image of [`ghz`] under
/// [`ghz_partner_operators`].
pub fn ghz_partner() -> Result<QuantumState> {
    QuantumState::pure(vec![2; 3], ket(3, &[(0, 0.5), (1, 0.5), (6, 0.5), (7, -0.5)]))
}

/// `I`, `diag(1, -1)` and the rotation `[[1, -1], [1, 1]]/√2`.
pub fn ghz_partner_operators() -> Vec<Matrix> {
    let s = 0.5f64.sqrt();
    vec![
        Matrix::identity(2, 2),
        Matrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
        Matrix::from_row_slice(2, 2, &[c(s), c(-s), c(s), c(s)]),
    ]
}

fn normalizer(a: f64, b: f64, cc: f64) -> f64 {
    2.0 + a + b + cc + 1.0 / a + 1.0 / b + 1.0 / cc
}

/// Three-qubit pair `(ρ, ρ')` related by [`mixed_pair_conjugator`] for
/// nonzero `a`, `b`, `c`:
/// `ρ ∝ diag(1, a, b, c, 1/c, 1/b, 1/a, 1) + |000><111| + |111><000|` and
/// `ρ' ∝ diag(c, b, a, 1, 1, 1/a, 1/b, 1/c) - |011><100| - |100><011|`.
pub fn mixed_pair(a: f64, b: f64, cc: f64) -> Result<(QuantumState, QuantumState)> {
    let k = normalizer(a, b, cc);
    let d1 = [1.0, a, b, cc, 1.0 / cc, 1.0 / b, 1.0 / a, 1.0];
    let mut rho = Matrix::from_diagonal(&Vector::from_iterator(8, d1.iter().map(|&x| c(x / k))));
    rho[(0, 7)] = c(1.0 / k);
    rho[(7, 0)] = c(1.0 / k);
    let d2 = [cc, b, a, 1.0, 1.0, 1.0 / a, 1.0 / b, 1.0 / cc];
    let mut rho_p = Matrix::from_diagonal(&Vector::from_iterator(8, d2.iter().map(|&x| c(x / k))));
    rho_p[(3, 4)] = c(-1.0 / k);
    rho_p[(4, 3)] = c(-1.0 / k);
    Ok((QuantumState::mixed(vec![2; 3], rho)?, QuantumState::mixed(vec![2; 3], rho_p)?))
}

/// `I ⊗ [[0, i], [i, 0]] ⊗ [[0, -1], [1, 0]]` as its three factors.
pub fn mixed_pair_conjugator() -> Vec<Matrix> {
    let i = Complex64::new(0.0, 1.0);
    let z = c(0.0);
    vec![
        Matrix::identity(2, 2),
        Matrix::from_row_slice(2, 2, &[z, i, i, z]),
        Matrix::from_row_slice(2, 2, &[z, c(-1.0), c(1.0), z]),
    ]
}

/// Sorted spectrum of [`mixed_pair`]: `{0, 1/c, 1/b, 1/a, 2, a, b, c} / K`
/// for `1 < a < b < c`.
pub fn mixed_pair_spectrum(a: f64, b: f64, cc: f64) -> Vec<f64> {
    let k = normalizer(a, b, cc);
    let mut v = vec![0.0, 1.0 / cc, 1.0 / b, 1.0 / a, 2.0, a, b, cc];
    v.sort_by(f64::total_cmp);
    v.into_iter().map(|x| x / k).collect()
}
