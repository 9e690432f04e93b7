use num_complex::Complex64;

use super::LocalWitness;
use crate::error::{shape, Result};
use crate::linalg::{fro, kronecker_all};
use crate::tensor::{apply_local, frobenius_norm, unfold, Matrix, Tensor};

/// Result of re-checking a pure-state witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessCheck {
    /// `‖(⊗M) X - Y‖ / ‖Y‖`.
    pub residual: f64,
    /// Largest difference between `unfold((⊗M) X, i)` and
    /// `M_i X_(i) (M_N ⊗ ... ⊗ M_{i+1} ⊗ M_{i-1} ⊗ ... ⊗ M_1)ᵗ` over all modes.
    pub unfolding_discrepancy: f64,
}

/// Kronecker product of every operator except `skip`, highest party first.
pub(crate) fn complement_kron(ms: &[Matrix], skip: usize) -> Matrix {
    let rest: Vec<Matrix> = ms
        .iter()
        .enumerate()
        .rev()
        .filter(|(k, _)| *k != skip)
        .map(|(_, m)| m.clone())
        .collect();
    kronecker_all(&rest)
}

pub fn verify_witness(x: &Tensor, y: &Tensor, w: &LocalWitness) -> Result<WitnessCheck> {
    if x.order() != w.matrices.len() {
        return shape(format!("{} operators for an order-{} tensor", w.matrices.len(), x.order()));
    }
    let image = apply_local(x, &w.matrices)?;
    if image.dims() != y.dims() {
        return shape(format!("witness maps to {:?}, target is {:?}", image.dims(), y.dims()));
    }
    let ny = frobenius_norm(y);
    let err = frobenius_norm(&image.sub(y)?);
    let residual = if ny == 0.0 { err } else { err / ny };
    let mut unfolding_discrepancy: f64 = 0.0;
    for i in 0..x.order() {
        let k = complement_kron(&w.matrices, i);
        let direct = &w.matrices[i] * unfold(x, i)? * k.transpose();
        let diff = fro(&(direct - unfold(&image, i)?));
        unfolding_discrepancy = unfolding_discrepancy.max(diff);
    }
    Ok(WitnessCheck { residual, unfolding_discrepancy })
}

/// `‖W ρ W† - ρ'‖ / ‖ρ'‖` with `W = M_1 ⊗ ... ⊗ M_N`.
pub fn verify_mixed_witness(rho: &Matrix, rho_prime: &Matrix, w: &LocalWitness) -> Result<f64> {
    let big = kronecker_all(&w.matrices);
    if big.ncols() != rho.nrows() || big.nrows() != rho_prime.nrows() || !rho.is_square() {
        return shape("witness does not match the density matrices");
    }
    let image = &big * rho * big.adjoint();
    let n = fro(rho_prime);
    let err = fro(&(image - rho_prime));
    Ok(if n == 0.0 { err } else { err / n })
}

/// Scalar `c` minimizing `‖c Z - Y‖`.
pub(crate) fn best_scale(z: &Tensor, y: &Tensor) -> Result<Complex64> {
    let zz = z.inner(z)?;
    if zz.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(z.inner(y)? / zz)
}
