//! CP decomposition by alternating least squares.
//!
//! `X ≈ Σ_r a_r^(1) ∘ ... ∘ a_r^(N)`, stored as factor matrices `A_n` of shape
//! `d_n x R`. With the crate's layout the mode-n unfolding of the model is
//! `A_n (A_N ⊙ ... ⊙ A_{n+1} ⊙ A_{n-1} ⊙ ... ⊙ A_1)ᵗ`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, shape, Result};
use crate::linalg::{eig_hermitian, hadamard, khatri_rao_all, svd_thin};
use crate::random::{ginibre, stream};
use crate::tensor::{fold, frobenius_norm, unfold, Matrix, Tensor};

/// Eigenvalues of the ALS normal matrix below this fraction of the largest
/// are treated as zero (pseudo-inverse solve).
pub const PINV_TOL: f64 = 1e-13;

/// `1 - fit` at which a restart stops: the residual has reached the rounding
/// floor and further sweeps only add noise.
pub const EXACT_FIT: f64 = 1e-10;

/// Column-norm products beyond this multiple of `‖X‖` count as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Factor matrices of a CP model with its fit against the source tensor.
#[derive(Debug, Clone)]
pub struct CpFactors {
    pub factors: Vec<Matrix>,
    pub rank: usize,
    /// `1 - ‖X - reconstruct‖ / ‖X‖`.
    pub fit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlsOptions {
    pub max_iters: usize,
    pub conv_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AlsOptions {
    fn default() -> Self {
        AlsOptions {
            max_iters: 500,
            conv_tol: 1e-12,
            restarts: 16,
            seed: 0,
        }
    }
}

impl AlsOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || self.restarts == 0 {
            return domain("ALS needs at least one sweep and one restart");
        }
        if !(self.conv_tol >= 0.0 && self.conv_tol.is_finite()) {
            return domain(format!("invalid convergence tolerance {}", self.conv_tol));
        }
        Ok(())
    }
}

/// Per-restart fit histories of an [`als_fit_traced`] run.
#[derive(Debug, Clone)]
pub struct AlsTrace {
    pub best: CpFactors,
    /// Fit after every sweep, one list per restart.
    pub histories: Vec<Vec<f64>>,
    /// Index of the restart that produced `best`.
    pub best_restart: usize,
}

/// Outcome of [`estimate_rank`]. Always an upper-bound witness: ALS cannot
/// certify that no smaller decomposition exists.
#[derive(Debug, Clone)]
pub struct RankEstimate {
    pub rank: usize,
    /// No `R <= R_max` reached the threshold; `rank` is then `R_max`.
    pub exceeds: bool,
    pub factors: Option<CpFactors>,
    pub heuristic: bool,
}

fn check_factors(factors: &[Matrix]) -> Result<usize> {
    let Some(first) = factors.first() else {
        return domain("CP model without factors");
    };
    let r = first.ncols();
    if factors.iter().any(|a| a.ncols() != r || a.nrows() == 0) {
        return shape("CP factor matrices must share their column count");
    }
    Ok(r)
}

/// Khatri-Rao product of all factors except `skip`, highest mode first.
fn khatri_rao_except(factors: &[Matrix], skip: usize) -> Result<Matrix> {
    let ms: Vec<&Matrix> = factors
        .iter()
        .enumerate()
        .rev()
        .filter(|(k, _)| *k != skip)
        .map(|(_, a)| a)
        .collect();
    if ms.is_empty() {
        let r = factors[skip].ncols();
        return Ok(Matrix::from_element(1, r, Complex64::new(1.0, 0.0)));
    }
    khatri_rao_all(&ms)
}

/// Sum of rank-one terms `Σ_r Π_n A_n[i_n, r]`.
pub fn reconstruct_factors(factors: &[Matrix]) -> Result<Tensor> {
    check_factors(factors)?;
    let dims: Vec<usize> = factors.iter().map(|a| a.nrows()).collect();
    let kr = khatri_rao_except(factors, 0)?;
    fold(&(&factors[0] * kr.transpose()), 0, &dims)
}

pub fn reconstruct(f: &CpFactors) -> Result<Tensor> {
    reconstruct_factors(&f.factors)
}

/// `1 - ‖X - reconstruct‖ / ‖X‖` (1 for an exact zero model of a zero tensor).
pub fn fit_of(t: &Tensor, factors: &[Matrix]) -> Result<f64> {
    let rec = reconstruct_factors(factors)?;
    let norm = frobenius_norm(t);
    let err = frobenius_norm(&t.sub(&rec)?);
    Ok(if norm == 0.0 {
        if err == 0.0 { 1.0 } else { f64::NEG_INFINITY }
    } else {
        1.0 - err / norm
    })
}

/// Largest product of per-mode column norms over the `R` components.
pub fn column_norm_product(factors: &[Matrix]) -> f64 {
    let r = factors.first().map_or(0, |a| a.ncols());
    (0..r)
        .map(|c| factors.iter().map(|a| a.column(c).norm()).product::<f64>())
        .fold(0.0, f64::max)
}

/// Initial factors from leading left singular vectors, padded with noise.
fn svd_init(t: &Tensor, r: usize, seed: u64) -> Result<Vec<Matrix>> {
    let mut rng = stream(seed, u64::MAX);
    let mut out = Vec::with_capacity(t.order());
    for n in 0..t.order() {
        let u = svd_thin(&unfold(t, n)?)?.u;
        let mut a = ginibre(t.dims()[n], r, &mut rng) * Complex64::new(1e-3, 0.0);
        for c in 0..r.min(u.ncols()) {
            a.column_mut(c).copy_from(&u.column(c));
        }
        out.push(a);
    }
    Ok(out)
}

fn random_init(t: &Tensor, r: usize, seed: u64, restart: usize) -> Vec<Matrix> {
    let mut rng = stream(seed, restart as u64);
    t.dims().iter().map(|&d| ginibre(d, r, &mut rng)).collect()
}

/// One least-squares update of mode `n`: `A_n = X_(n) conj(K) V^{-1}` with
/// `V = ∗_{k≠n} A_kᵗ conj(A_k)`.
fn update_mode(unfoldings: &[Matrix], factors: &mut [Matrix], n: usize) -> Result<()> {
    let r = factors[n].ncols();
    let mut v = Matrix::from_element(r, r, Complex64::new(1.0, 0.0));
    for (k, a) in factors.iter().enumerate() {
        if k != n {
            v = hadamard(&v, &(a.transpose() * a.conjugate()))?;
        }
    }
    let v = (&v + v.adjoint()) * Complex64::new(0.5, 0.0);
    let kr = khatri_rao_except(factors, n)?;
    let rhs = &unfoldings[n] * kr.conjugate();
    // V is Hermitian PSD; the minimum-norm solution of A V = rhs is an exact
    // least-squares minimizer even when V is singular.
    let e = eig_hermitian(&v)?;
    let top = e.values.last().copied().unwrap_or(0.0);
    let inv = crate::tensor::Vector::from_iterator(
        r,
        e.values.iter().map(|&l| Complex64::new(if l > PINV_TOL * top { 1.0 / l } else { 0.0 }, 0.0)),
    );
    let sol = rhs * &e.vectors * Matrix::from_diagonal(&inv) * e.vectors.adjoint();
    factors[n] = sol;
    Ok(())
}

/// Runs one restart and returns the final factors, fit and fit history.
fn run_restart(
    t: &Tensor,
    unfoldings: &[Matrix],
    mut factors: Vec<Matrix>,
    opts: &AlsOptions,
) -> Result<(Vec<Matrix>, f64, Vec<f64>)> {
    let norm = frobenius_norm(t);
    let mut history = Vec::new();
    let mut fit = fit_of(t, &factors)?;
    for sweep in 0..opts.max_iters {
        let previous = factors.clone();
        for n in 0..factors.len() {
            update_mode(unfoldings, &mut factors, n)?;
        }
        let mut next = fit_of(t, &factors)?;
        // extrapolate along the sweep direction; kept only when it helps
        if sweep >= 2 {
            let step = Complex64::new(((sweep + 1) as f64).cbrt(), 0.0);
            let trial: Vec<Matrix> = factors.iter().zip(&previous).map(|(a, b)| a + (a - b) * step).collect();
            let f = fit_of(t, &trial)?;
            if f > next {
                factors = trial;
                next = f;
            }
        }
        if next < fit {
            // exact sweeps never lower the fit; this is rounding noise
            factors = previous;
            break;
        }
        history.push(next);
        let done = next - fit < opts.conv_tol || 1.0 - next <= EXACT_FIT;
        fit = next;
        if done || column_norm_product(&factors) > DIVERGENCE_LIMIT * norm {
            break;
        }
    }
    Ok((factors, fit, history))
}

/// ALS with the best fit kept over all restarts, also returning each
/// restart's fit history. Restart 0 starts from the leading singular vectors
/// of the unfoldings, the rest from complex Gaussian factors.
/// Factors, fit and fit history of one restart.
type RestartRun = (Vec<Matrix>, f64, Vec<f64>);

pub fn als_fit_traced(t: &Tensor, r: usize, opts: &AlsOptions) -> Result<AlsTrace> {
    if r == 0 {
        return domain("CP rank must be at least 1");
    }
    opts.validate()?;
    let unfoldings: Vec<Matrix> = (0..t.order()).map(|n| unfold(t, n)).collect::<Result<_>>()?;
    let runs: Vec<Result<RestartRun>> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let init = if k == 0 {
                svd_init(t, r, opts.seed)?
            } else {
                random_init(t, r, opts.seed, k)
            };
            run_restart(t, &unfoldings, init, opts)
        })
        .collect();
    let mut best: Option<(usize, Vec<Matrix>, f64)> = None;
    let mut histories = Vec::with_capacity(runs.len());
    for (k, run) in runs.into_iter().enumerate() {
        let (factors, fit, history) = run?;
        histories.push(history);
        if best.as_ref().is_none_or(|(_, _, b)| fit > *b) {
            best = Some((k, factors, fit));
        }
    }
    let (best_restart, factors, fit) = best.expect("at least one restart");
    Ok(AlsTrace {
        best: CpFactors { factors, rank: r, fit },
        histories,
        best_restart,
    })
}

/// Best-fit rank-`r` CP model over `opts.restarts` ALS runs.
pub fn als_fit(t: &Tensor, r: usize, opts: &AlsOptions) -> Result<CpFactors> {
    Ok(als_fit_traced(t, r, opts)?.best)
}

/// Smallest `R <= r_max` whose ALS fit reaches `fit_threshold` without the
/// factors diverging. The zero tensor has rank 0.
pub fn estimate_rank(t: &Tensor, fit_threshold: f64, r_max: usize, opts: &AlsOptions) -> Result<RankEstimate> {
    if !(fit_threshold > 0.0 && fit_threshold < 1.0) {
        return domain(format!("fit threshold must lie in (0, 1), got {fit_threshold}"));
    }
    let norm = frobenius_norm(t);
    if norm == 0.0 {
        return Ok(RankEstimate {
            rank: 0,
            exceeds: false,
            factors: None,
            heuristic: true,
        });
    }
    let mut last = None;
    for r in 1..=r_max {
        let f = als_fit(t, r, opts)?;
        let bounded = column_norm_product(&f.factors) <= DIVERGENCE_LIMIT * norm;
        if f.fit >= fit_threshold && bounded {
            return Ok(RankEstimate {
                rank: r,
                exceeds: false,
                factors: Some(f),
                heuristic: true,
            });
        }
        last = Some(f);
    }
    Ok(RankEstimate {
        rank: r_max,
        exceeds: true,
        factors: last,
        heuristic: true,
    })
}
