//! Direct local-operator minimization, used as an independent oracle in tests.
//!
//! It works on the raw tensors with alternating exact block updates (polar
//! factors for unitaries, regularized least squares for invertibles) from
//! random starts. No SVD frames, clusters or pivot forms are involved.

use num_complex::Complex64;
use rayon::prelude::*;

use super::WitnessMode;
use crate::error::{domain, Result};
use crate::linalg::polar_unitary;
use crate::random::{ginibre, haar_unitary, stream};
use crate::tensor::{apply_local, apply_partial, frobenius_norm, unfold, Matrix, Tensor};

/// Largest total dimension accepted.
pub const BRUTE_MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteBudget {
    pub restarts: usize,
    /// Sweeps over all parties per restart.
    pub iters: usize,
    pub seed: u64,
}

impl Default for BruteBudget {
    fn default() -> Self {
        BruteBudget { restarts: 24, iters: 400, seed: 0 }
    }
}

/// Best operators found. They are not validated as a witness: in invertible
/// mode the infimum may only be approached by nearly singular operators.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteResult {
    pub matrices: Vec<Matrix>,
    /// `‖(⊗M) X - Y‖ / ‖Y‖`.
    pub residual: f64,
    pub restart: usize,
}

fn residual(x: &Tensor, y: &Tensor, ms: &[Matrix]) -> Result<f64> {
    Ok(frobenius_norm(&apply_local(x, ms)?.sub(y)?) / frobenius_norm(y))
}

fn sweep(x: &Tensor, y: &Tensor, ms: &mut [Matrix], mode: WitnessMode) -> Result<()> {
    let n = ms.len();
    for k in 0..n {
        let ops: Vec<Option<&Matrix>> = (0..n).map(|j| (j != k).then(|| &ms[j])).collect();
        let z = unfold(&apply_partial(x, &ops)?, k)?;
        let g = unfold(y, k)? * z.adjoint();
        ms[k] = match mode {
            WitnessMode::Unitary => polar_unitary(&g)?,
            WitnessMode::Invertible => {
                let mut gram = &z * z.adjoint();
                let ridge = 1e-13 * gram.trace().re.max(f64::MIN_POSITIVE);
                for i in 0..gram.nrows() {
                    gram[(i, i)] += Complex64::new(ridge, 0.0);
                }
                match gram.try_inverse() {
                    Some(inv) => g * inv,
                    None => return Ok(()),
                }
            }
        };
    }
    Ok(())
}

fn descend(x: &Tensor, y: &Tensor, mode: WitnessMode, budget: &BruteBudget, restart: usize) -> Result<(Vec<Matrix>, f64)> {
    let mut rng = stream(budget.seed, restart as u64);
    let mut ms: Vec<Matrix> = x
        .dims()
        .iter()
        .map(|&d| match (restart, mode) {
            (0, _) => Matrix::identity(d, d),
            (_, WitnessMode::Unitary) => haar_unitary(d, &mut rng),
            (_, WitnessMode::Invertible) => ginibre(d, d, &mut rng),
        })
        .collect();
    let mut res = residual(x, y, &ms)?;
    for _ in 0..budget.iters {
        if res <= 1e-14 {
            break;
        }
        let mut next = ms.clone();
        sweep(x, y, &mut next, mode)?;
        let r = residual(x, y, &next)?;
        if !r.is_finite() {
            break;
        }
        let improved = r < res;
        if improved || mode == WitnessMode::Unitary {
            ms = next;
        }
        let stalled = res - r <= 1e-12 * res;
        res = res.min(r);
        if stalled {
            break;
        }
    }
    Ok((ms, res))
}

/// Minimizes `‖(⊗M_k) X - Y‖` over local unitaries or invertibles; restart 0
/// starts at the identity, the others at random operators.
pub fn brute_force_local_search(x: &Tensor, y: &Tensor, mode: WitnessMode, budget: &BruteBudget) -> Result<BruteResult> {
    if x.dims() != y.dims() {
        return domain(format!("tensors of dims {:?} and {:?}", x.dims(), y.dims()));
    }
    if x.len() > BRUTE_MAX_DIM {
        return domain(format!("total dimension {} exceeds {BRUTE_MAX_DIM}", x.len()));
    }
    if budget.restarts == 0 || frobenius_norm(y) == 0.0 {
        return domain("need at least one restart and a nonzero target");
    }
    let runs: Vec<Result<(Vec<Matrix>, f64)>> =
        (0..budget.restarts).into_par_iter().map(|r| descend(x, y, mode, budget, r)).collect();
    let mut best: Option<BruteResult> = None;
    for (restart, run) in runs.into_iter().enumerate() {
        let (matrices, residual) = run?;
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(BruteResult { matrices, residual, restart });
        }
    }
    Ok(best.expect("at least one restart"))
}
