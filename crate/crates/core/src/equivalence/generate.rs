//! Seeded equivalent pairs with a known witness, for testing the checkers.

use num_complex::Complex64;

use super::{LocalWitness, WitnessMode};
use crate::error::{domain, Result};
use crate::linalg::{eig_hermitian, kronecker_all};
use crate::random::{conditioned_invertible, full_rank_density, haar_state, haar_unitary, stream};
use crate::state::{QuantumState, StateKind};
use crate::tensor::Matrix;

/// Smallest relative eigenvalue gap accepted for generated mixed states.
const MIN_GAP: f64 = 1e-6;
const MAX_ATTEMPTS: u64 = 1000;

/// `b` is the image of `a` under `witness` (pure: `(⊗M) a`, mixed:
/// `(⊗M) ρ (⊗M)†`), exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentPair {
    pub a: QuantumState,
    pub b: QuantumState,
    pub witness: LocalWitness,
}

fn nondegenerate(rho: &Matrix) -> Result<bool> {
    let v = eig_hermitian(rho)?.values;
    let top = v[v.len() - 1];
    Ok(v.windows(2).all(|w| w[1] - w[0] > MIN_GAP * top))
}

/// Haar-random pure state or full-rank nondegenerate mixed state, and its
/// image under seeded Haar unitaries or invertibles with singular values in
/// `[0.5, 2]`. In invertible mode the first operator is rescaled so the image
/// is normalized.
pub fn generate_equivalent_pair(dims: &[usize], kind: StateKind, mode: WitnessMode, seed: u64) -> Result<EquivalentPair> {
    if dims.is_empty() || dims.contains(&0) {
        return domain(format!("invalid party dimensions {dims:?}"));
    }
    let total: usize = dims.iter().product();
    let mut rng = stream(seed, 0);
    let a = match kind {
        StateKind::Pure => QuantumState::pure(dims.to_vec(), haar_state(total, &mut rng))?,
        StateKind::Mixed => {
            let mut attempt = 0;
            loop {
                let rho = full_rank_density(total, &mut rng);
                if nondegenerate(&rho)? {
                    break QuantumState::mixed(dims.to_vec(), rho)?;
                }
                attempt += 1;
                if attempt >= MAX_ATTEMPTS {
                    return domain("could not draw a nondegenerate density matrix");
                }
            }
        }
    };
    let mut ms: Vec<Matrix> = dims
        .iter()
        .map(|&d| match mode {
            WitnessMode::Unitary => haar_unitary(d, &mut rng),
            WitnessMode::Invertible => conditioned_invertible(d, 0.5, 2.0, &mut rng),
        })
        .collect();
    let b = match &a {
        QuantumState::Pure { amplitudes, .. } => {
            let mut image = kronecker_all(&ms) * amplitudes;
            if mode == WitnessMode::Invertible {
                let n = image.norm();
                ms[0] /= Complex64::new(n, 0.0);
                image /= Complex64::new(n, 0.0);
            }
            QuantumState::pure(dims.to_vec(), image)?
        }
        QuantumState::Mixed { rho, .. } => {
            let mut w = kronecker_all(&ms);
            if mode == WitnessMode::Invertible {
                let tr = (&w * rho * w.adjoint()).trace().re;
                let s = Complex64::new(1.0 / tr.sqrt(), 0.0);
                ms[0] *= s;
                w *= s;
            }
            let image = &w * rho * w.adjoint();
            QuantumState::mixed(dims.to_vec(), (&image + image.adjoint()) * Complex64::new(0.5, 0.0))?
        }
    };
    Ok(EquivalentPair { a, b, witness: LocalWitness::new(ms, mode)? })
}
