//! Mixed-state deciders: LU equivalence through a conjugating product unitary,
//! and necessary SLOCC conditions on Gell-Mann coefficient tensors.

use std::collections::VecDeque;

use num_complex::Complex64;

use super::align::align_unitary;
use super::invariants::{mixed_lu_invariants, unfolding_spectra};
use super::pure::{build_witness_svd, WitnessSearch};
use super::verify::verify_mixed_witness;
use super::{
    Certificate, CheckOptions, Diagnostics, Equivalence, Invariant, InvariantValue, LocalWitness, Verdict, WitnessMode,
};
use crate::error::{domain, Result};
use crate::kron::{factorize_multiparty, realignment_gaps, unitarize_factors};
use crate::linalg::{eig_hermitian, rank_of};
use crate::state::{coefficients_of, ket_index, QuantumState, StateKind};
use crate::tensor::{Matrix, Tensor};

/// Clusters above this size are attempted but flagged in diagnostics.
const LARGE_CLUSTER: usize = 4;

fn densities<'a>(a: &'a QuantumState, b: &'a QuantumState) -> Result<(&'a [usize], Matrix, Matrix)> {
    if a.kind() != StateKind::Mixed || b.kind() != StateKind::Mixed {
        return domain("mixed-state check needs two density matrices");
    }
    if a.dims() != b.dims() {
        return domain(format!("party dimensions differ: {:?} vs {:?}", a.dims(), b.dims()));
    }
    Ok((a.dims(), a.density(), b.density()))
}

/// `T[i_1..i_N, j] = c_j v_j[ket(i)]` with `c_j = sqrt(p_j + 1/n)`: the label
/// mode has singular values `c_j`, so its gauge is block diagonal over the
/// eigenvalue clusters while the party modes carry the local unitaries.
fn augmented(dims: &[usize], values: &[f64], vectors: &Matrix) -> Result<Tensor> {
    let n = values.len();
    let c: Vec<f64> = values.iter().map(|&p| (p.max(0.0) + 1.0 / n as f64).sqrt()).collect();
    let mut full = dims.to_vec();
    full.push(n);
    Tensor::from_fn(full, |idx| {
        let (party, j) = idx.split_at(dims.len());
        vectors[(ket_index(party, dims), j[0])] * c[j[0]]
    })
}

fn largest_cluster(values: &[f64], rel: f64) -> usize {
    let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let (mut best, mut run) = (1, 1);
    for w in values.windows(2) {
        if (w[1] - w[0]).abs() <= rel * top {
            run += 1;
            best = best.max(run);
        } else {
            run = 1;
        }
    }
    best
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Deterministic representative of the witness modulo local diagonal
/// symmetries of `ρ`: factors `1..N-1` get each column's largest entry real
/// and positive, and the last factor's column phases are solved so that the
/// combined diagonal gauge commutes with `ρ`. `None` if no such gauge exists.
fn canonical_gauge(us: &[Matrix], rho: &Matrix, dims: &[usize]) -> Option<Vec<Matrix>> {
    let n = us.len();
    if n < 2 {
        return None;
    }
    let mut phases: Vec<Vec<Complex64>> = us[..n - 1]
        .iter()
        .map(|u| {
            (0..u.ncols())
                .map(|c| {
                    let col = u.column(c);
                    let z = col.iter().copied().fold(Complex64::new(0.0, 0.0), |m, z| if z.norm() > m.norm() { z } else { m });
                    z.conj() / z.norm()
                })
                .collect()
        })
        .collect();
    let last = dims[n - 1];
    let fixed = |idx: &[usize]| -> Complex64 { (0..n - 1).map(|k| phases[k][idx[k]]).product() };
    let top = rho.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let mut edges: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); last];
    for a in 0..rho.nrows() {
        for b in 0..rho.ncols() {
            if rho[(a, b)].norm() <= 1e-12 * top {
                continue;
            }
            let (ia, ib) = (digits(a, dims), digits(b, dims));
            let ratio = fixed(&ia) / fixed(&ib);
            let (xa, xb) = (ia[n - 1], ib[n - 1]);
            if xa == xb {
                if (ratio - 1.0).norm() > 1e-9 {
                    return None;
                }
                continue;
            }
            // x[xb] = x[xa] * ratio
            edges[xa].push((xb, ratio));
            edges[xb].push((xa, ratio.inv()));
        }
    }
    let mut x: Vec<Option<Complex64>> = vec![None; last];
    for root in 0..last {
        if x[root].is_some() {
            continue;
        }
        x[root] = Some(Complex64::new(1.0, 0.0));
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let xv = x[v]?;
            for &(w, r) in &edges[v] {
                let want = xv * r;
                match x[w] {
                    Some(xw) if (xw - want).norm() > 1e-9 => return None,
                    Some(_) => {}
                    None => {
                        x[w] = Some(want);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    phases.push(x.into_iter().collect::<Option<Vec<_>>>()?);
    Some(
        us.iter()
            .zip(&phases)
            .map(|(u, p)| {
                let mut out = u.clone();
                for (c, &z) in p.iter().enumerate() {
                    for r in 0..out.nrows() {
                        out[(r, c)] *= z;
                    }
                }
                out
            })
            .collect(),
    )
}

/// LU equivalence of two mixed states: `ρ' = (⊗U_k) ρ (⊗U_k)†`.
pub fn mixed_lu_check(a: &QuantumState, b: &QuantumState, opts: &CheckOptions) -> Result<Verdict> {
    opts.validate()?;
    let (dims, rho, rho_p) = densities(a, b)?;
    if let Some(cert) = mixed_lu_invariants(&rho, &rho_p, opts)? {
        return Ok(Verdict::NotEquivalent(cert));
    }
    if let Some(cert) = reduced_spectra(&rho, &rho_p, dims, opts)? {
        return Ok(Verdict::NotEquivalent(cert));
    }
    let ea = eig_hermitian(&rho)?;
    let eb = eig_hermitian(&rho_p)?;
    let n = dims.len();
    let mut diag = Diagnostics { mode_gaps: vec![f64::INFINITY; n], best_residual: f64::INFINITY, ..Default::default() };
    let cluster = largest_cluster(&ea.values, opts.cluster_tol);
    if cluster > LARGE_CLUSTER {
        diag.notes.push(format!("large degeneracy: eigenvalue cluster of size {cluster}"));
    }
    let t = augmented(dims, &ea.values, &ea.vectors)?;
    let tp = augmented(dims, &eb.values, &eb.vectors)?;
    let al = align_unitary(&t, &tp, None, opts)?;
    diag.best_residual = al.residual;
    // (⊗U) V = V' conj(G): the label-mode operator G carries the eigenvector gauge.
    let p = &eb.vectors * al.unitaries[n].map(|z| z.conj()) * ea.vectors.adjoint();
    let gaps = realignment_gaps(&p, dims)?.unwrap_or_else(|| vec![f64::INFINITY; n]);
    diag.mode_gaps = gaps.clone();
    if gaps.iter().any(|&g| g > opts.tol) {
        diag.notes.push("conjugating matrix is not a product across parties".into());
        return Ok(Verdict::Inconclusive(diag));
    }
    let us = match factorize_multiparty(&p, dims, opts.tol).and_then(|f| unitarize_factors(&f)) {
        Ok(us) => us,
        Err(e) => {
            diag.notes.push(e.to_string());
            return Ok(Verdict::Inconclusive(diag));
        }
    };
    let mut witness = LocalWitness::new(us, WitnessMode::Unitary)?;
    let mut residual = verify_mixed_witness(&rho, &rho_p, &witness)?;
    if let Some(canon) = canonical_gauge(&witness.matrices, &rho, dims) {
        if let Ok(w) = LocalWitness::new(canon, WitnessMode::Unitary) {
            let r = verify_mixed_witness(&rho, &rho_p, &w)?;
            if r <= opts.tol {
                witness = w;
                residual = r;
            }
        }
    }
    diag.best_residual = diag.best_residual.min(residual);
    if residual <= opts.tol {
        return Ok(Verdict::Equivalent(Equivalence { witness, residual, pivot: None, mode_gaps: gaps }));
    }
    diag.notes.push(format!("conjugation residual {residual:.3e}"));
    Ok(Verdict::Inconclusive(diag))
}

/// `Tr_{others} ρ` for party `k` (ket order, party 1 slowest).
pub(crate) fn reduced_density(rho: &Matrix, dims: &[usize], k: usize) -> Matrix {
    let d = dims[k];
    let mut out = Matrix::zeros(d, d);
    for a in 0..rho.nrows() {
        let ia = digits(a, dims);
        for b in 0..rho.ncols() {
            let ib = digits(b, dims);
            if (0..dims.len()).all(|j| j == k || ia[j] == ib[j]) {
                out[(ia[k], ib[k])] += rho[(a, b)];
            }
        }
    }
    out
}

/// Single-party reduced spectra, also invariant under local unitaries.
fn reduced_spectra(rho: &Matrix, rho_p: &Matrix, dims: &[usize], opts: &CheckOptions) -> Result<Option<Certificate>> {
    if dims.len() < 2 {
        return Ok(None);
    }
    for k in 0..dims.len() {
        let ra = reduced_density(rho, dims, k);
        let rb = reduced_density(rho_p, dims, k);
        if let Some(mut cert) = mixed_lu_invariants(&ra, &rb, opts)? {
            cert.mode = Some(k);
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Operators `L_k` with `x' = (⊗L_k) x` on the coefficient tensors, found by
/// the pure-state witness search. Supporting evidence only.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEvidence {
    pub operators: LocalWitness,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MixedSloccOutcome {
    /// No necessary condition is violated. This is not an equivalence claim.
    Pass {
        unfolding_ranks: Vec<usize>,
        density_rank: usize,
        evidence: Option<CoefficientEvidence>,
    },
    Certificate(Certificate),
}

/// Necessary SLOCC conditions for mixed states: equal unfolding ranks of the
/// Gell-Mann coefficient tensors and equal density-matrix ranks. With `search`
/// set, also looks for invertible `L_k` relating the coefficient tensors.
pub fn mixed_slocc_necessary(
    a: &QuantumState,
    b: &QuantumState,
    search: bool,
    opts: &CheckOptions,
) -> Result<MixedSloccOutcome> {
    opts.validate()?;
    let (dims, rho, rho_p) = densities(a, b)?;
    let x = coefficients_of(&rho, dims)?;
    let y = coefficients_of(&rho_p, dims)?;
    let sx = unfolding_spectra(&x)?;
    let sy = unfolding_spectra(&y)?;
    let mut ranks = Vec::with_capacity(dims.len());
    for i in 0..dims.len() {
        let (rx, ry) = (rank_of(&sx[i], opts.tol), rank_of(&sy[i], opts.tol));
        if rx != ry {
            return Ok(MixedSloccOutcome::Certificate(Certificate {
                invariant: Invariant::CoefficientUnfoldingRank,
                mode: Some(i),
                left: InvariantValue::Rank(rx),
                right: InvariantValue::Rank(ry),
            }));
        }
        ranks.push(rx);
    }
    let density_rank = |m: &Matrix| -> Result<usize> {
        let mut v = eig_hermitian(m)?.values;
        v.reverse();
        Ok(rank_of(&v, opts.tol))
    };
    let (ra, rb) = (density_rank(&rho)?, density_rank(&rho_p)?);
    if ra != rb {
        return Ok(MixedSloccOutcome::Certificate(Certificate {
            invariant: Invariant::DensityRank,
            mode: None,
            left: InvariantValue::Rank(ra),
            right: InvariantValue::Rank(rb),
        }));
    }
    let evidence = if search {
        match build_witness_svd(&x, &y, WitnessMode::Invertible, opts)? {
            WitnessSearch::Found { witness, residual, .. } => Some(CoefficientEvidence { operators: witness, residual }),
            WitnessSearch::Failed(_) => None,
        }
    } else {
        None
    };
    Ok(MixedSloccOutcome::Pass { unfolding_ranks: ranks, density_rank: ra, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kronecker_all;

    #[test]
    fn partial_trace_of_product() {
        let a = Matrix::from_row_slice(2, 2, &[0.7, 0.1, 0.1, 0.3].map(|v| Complex64::new(v, 0.0)));
        let b = Matrix::from_row_slice(3, 3, &[0.5, 0.0, 0.1, 0.0, 0.3, 0.0, 0.1, 0.0, 0.2].map(|v| Complex64::new(v, 0.0)));
        let rho = kronecker_all(&[a.clone(), b.clone()]);
        assert!((reduced_density(&rho, &[2, 3], 0) - &a).norm() < 1e-15);
        assert!((reduced_density(&rho, &[2, 3], 1) - &b).norm() < 1e-15);
    }

    #[test]
    fn cluster_sizes() {
        assert_eq!(largest_cluster(&[0.1, 0.1, 0.1, 0.2, 0.5], 1e-6), 3);
        assert_eq!(largest_cluster(&[0.1, 0.2], 1e-6), 1);
    }
}
