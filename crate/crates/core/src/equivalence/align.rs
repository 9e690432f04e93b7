//! Local-unitary alignment of two tensors in their unfolding SVD frames.
//!
//! If `Y = (⊗U_k) X`, every unfolding satisfies `Y_(k) = U_k X_(k) Q_kᵗ` with
//! `Q_k` unitary, so the left singular frames agree up to a unitary `H_k`
//! that is block diagonal over clusters of equal singular values:
//! `U_k = A'_k H_k A_k†`. In core coordinates `X~ = (⊗A_k†) X`,
//! `Y~ = (⊗A'_k†) Y` the problem is `Y~ = (⊗H_k) X~`, solved by maximizing
//! `Re <Y~, (⊗H_k) X~>` one mode at a time (each step is a block polar
//! decomposition).

use num_complex::Complex64;
use rayon::prelude::*;

use super::CheckOptions;
use crate::error::Result;
use crate::linalg::{fro, polar_unitary, svd};
use crate::random::{haar_unitary, stream};
use crate::tensor::{apply_local, apply_partial, frobenius_norm, unfold, Matrix, Tensor};

/// Restarts evaluated together; results do not depend on thread count.
const BATCH: usize = 8;
/// Residual at which a restart stops early.
const DONE: f64 = 1e-14;

/// Cluster `(start, len)` ranges of two descending singular value lists.
/// A boundary is placed only where both lists show a relative gap; all
/// values below `zero_tol * σ_1` form one cluster.
pub(crate) fn clusters(a: &[f64], b: &[f64], gap_tol: f64, zero_tol: f64) -> Vec<(usize, usize)> {
    let n = a.len();
    let top = a.first().copied().unwrap_or(0.0).max(b.first().copied().unwrap_or(0.0));
    let is_zero = |k: usize| a[k] <= zero_tol * top && b[k] <= zero_tol * top;
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        let boundary = k == n
            || (!is_zero(k - 1) || !is_zero(k))
                && (a[k - 1] - a[k] > gap_tol * top && b[k - 1] - b[k] > gap_tol * top);
        if boundary {
            out.push((start, k - start));
            start = k;
        }
    }
    out
}

#[derive(Debug, Clone)]
pub(crate) struct Alignment {
    pub unitaries: Vec<Matrix>,
    pub residual: f64,
    pub restart: usize,
}

struct Problem {
    xt: Tensor,
    yt: Tensor,
    frames_x: Vec<Matrix>,
    frames_y: Vec<Matrix>,
    blocks: Vec<Vec<(usize, usize)>>,
}

fn block_unitary(d: usize, blocks: &[(usize, usize)], mut fill: impl FnMut(usize) -> Matrix) -> Matrix {
    let mut h = Matrix::zeros(d, d);
    for &(s, n) in blocks {
        h.view_mut((s, s), (n, n)).copy_from(&fill(n));
    }
    h
}

fn setup(x: &Tensor, y: &Tensor, extra: Option<&[Vec<(usize, usize)>]>, opts: &CheckOptions) -> Result<Problem> {
    let mut frames_x = Vec::with_capacity(x.order());
    let mut frames_y = Vec::with_capacity(x.order());
    let mut blocks = Vec::with_capacity(x.order());
    for k in 0..x.order() {
        let sx = svd(&unfold(x, k)?)?;
        let sy = svd(&unfold(y, k)?)?;
        let d = x.dims()[k];
        let mut a = sx.sigma.clone();
        let mut b = sy.sigma.clone();
        a.resize(d, 0.0);
        b.resize(d, 0.0);
        let mut bl = clusters(&a, &b, opts.cluster_tol, opts.tol);
        if let Some(forced) = extra.and_then(|e| e.get(k)) {
            if !forced.is_empty() {
                bl = forced.clone();
            }
        }
        frames_x.push(sx.u);
        frames_y.push(sy.u);
        blocks.push(bl);
    }
    let adj = |fs: &[Matrix]| fs.iter().map(|a| a.adjoint()).collect::<Vec<_>>();
    let xt = apply_local(x, &adj(&frames_x))?;
    let yt = apply_local(y, &adj(&frames_y))?;
    Ok(Problem { xt, yt, frames_x, frames_y, blocks })
}

fn residual(p: &Problem, hs: &[Matrix]) -> Result<f64> {
    let z = apply_local(&p.xt, hs)?;
    let ny = frobenius_norm(&p.yt);
    Ok(frobenius_norm(&z.sub(&p.yt)?) / ny.max(f64::MIN_POSITIVE))
}

fn run(p: &Problem, mut hs: Vec<Matrix>, sweeps: usize) -> Result<(Vec<Matrix>, f64)> {
    let n = hs.len();
    let mut res = residual(p, &hs)?;
    for sweep in 0..sweeps {
        if res <= DONE {
            break;
        }
        for k in 0..n {
            let ops: Vec<Option<&Matrix>> = (0..n).map(|j| (j != k).then(|| &hs[j])).collect();
            let z = apply_partial(&p.xt, &ops)?;
            let w = unfold(&z, k)? * unfold(&p.yt, k)?.adjoint();
            let mut h = hs[k].clone();
            for &(s, len) in &p.blocks[k] {
                let wb = w.view((s, s), (len, len)).into_owned();
                if fro(&wb) > 1e-300 {
                    h.view_mut((s, s), (len, len)).copy_from(&polar_unitary(&wb)?.adjoint());
                }
            }
            hs[k] = h;
        }
        let next = residual(p, &hs)?;
        let stalled = sweep >= 20 && res - next <= 1e-12 * res;
        res = next;
        if stalled {
            break;
        }
    }
    Ok((hs, res))
}

fn initial(p: &Problem, seed: u64, restart: usize) -> Vec<Matrix> {
    let mut rng = stream(seed, restart as u64);
    p.blocks
        .iter()
        .zip(p.xt.dims())
        .map(|(bl, &d)| {
            if restart == 0 {
                Matrix::identity(d, d)
            } else {
                block_unitary(d, bl, |len| haar_unitary(len, &mut rng))
            }
        })
        .collect()
}

/// Searches local unitaries with `(⊗U_k) X ≈ Y`. `forced_blocks` replaces the
/// cluster structure of chosen modes (empty entries keep the computed one).
/// Returns the best restart; `residual` is relative to `‖Y‖`.
pub(crate) fn align_unitary(
    x: &Tensor,
    y: &Tensor,
    forced_blocks: Option<&[Vec<(usize, usize)>]>,
    opts: &CheckOptions,
) -> Result<Alignment> {
    let p = setup(x, y, forced_blocks, opts)?;
    let mut best: Option<(usize, Vec<Matrix>, f64)> = None;
    let mut start = 0;
    while start < opts.restarts {
        let end = (start + BATCH).min(opts.restarts);
        let runs: Vec<Result<(Vec<Matrix>, f64)>> = (start..end)
            .into_par_iter()
            .map(|r| run(&p, initial(&p, opts.seed, r), opts.sweeps))
            .collect();
        for (r, out) in (start..end).zip(runs) {
            let (hs, res) = out?;
            if best.as_ref().is_none_or(|b| res < b.2) {
                best = Some((r, hs, res));
            }
        }
        if best.as_ref().is_some_and(|b| b.2 <= opts.tol * 1e-2) {
            break;
        }
        start = end;
    }
    let (restart, hs, residual) = best.expect("at least one restart");
    let unitaries = hs
        .iter()
        .enumerate()
        .map(|(k, h)| &p.frames_y[k] * h * p.frames_x[k].adjoint())
        .collect();
    Ok(Alignment { unitaries, residual, restart })
}

/// Makes `ms` reproduce `y` exactly in scale by multiplying the first operator
/// with the least-squares scalar.
pub(crate) fn fix_scale(x: &Tensor, y: &Tensor, ms: &mut [Matrix]) -> Result<Complex64> {
    let z = apply_local(x, ms)?;
    let c = super::verify::best_scale(&z, y)?;
    ms[0] *= c;
    Ok(c)
}
