//! Matrix products, vectorization, realignment and the dense SVD/eigen kernels.
//!
//! Conventions: `vec` stacks columns, the Kronecker product uses the usual
//! block layout `[a_ij B]`, and multiparty matrices index party 1 slowest.

use nalgebra::linalg::{SymmetricEigen, QR};
use num_complex::Complex64;

use crate::error::{domain, shape, Error, Result};
use crate::tensor::{Matrix, Vector};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const EIG_MAX_ITERS: usize = 10_000;
const JACOBI_MAX_SWEEPS: usize = 60;
const JACOBI_EPS: f64 = 1e-15;

/// Kronecker product `A ⊗ B`.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = Matrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for q in 0..bc {
                for p in 0..br {
                    out[(i * br + p, j * bc + q)] = aij * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list, `M_1 ⊗ M_2 ⊗ ... ⊗ M_k`.
pub fn kronecker_all(ms: &[Matrix]) -> Matrix {
    let mut iter = ms.iter();
    let Some(first) = iter.next() else {
        return Matrix::identity(1, 1);
    };
    iter.fold(first.clone(), |acc, m| kronecker(&acc, m))
}

/// Khatri-Rao (columnwise Kronecker) product `A ⊙ B`.
pub fn khatri_rao(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.ncols() != b.ncols() {
        return shape(format!(
            "Khatri-Rao needs equal column counts, got {} and {}",
            a.ncols(),
            b.ncols()
        ));
    }
    let (ar, br) = (a.nrows(), b.nrows());
    let mut out = Matrix::zeros(ar * br, a.ncols());
    for r in 0..a.ncols() {
        for i in 0..ar {
            for p in 0..br {
                out[(i * br + p, r)] = a[(i, r)] * b[(p, r)];
            }
        }
    }
    Ok(out)
}

/// Khatri-Rao product of a list, left to right.
pub fn khatri_rao_all(ms: &[&Matrix]) -> Result<Matrix> {
    let mut iter = ms.iter();
    let Some(first) = iter.next() else {
        return domain("Khatri-Rao product of an empty list");
    };
    iter.try_fold((*first).clone(), |acc, m| khatri_rao(&acc, m))
}

/// Entrywise (Hadamard) product `A ∗ B`.
pub fn hadamard(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.shape() != b.shape() {
        return shape(format!("Hadamard of {:?} and {:?}", a.shape(), b.shape()));
    }
    Ok(a.component_mul(b))
}

/// Column stacking `[y_11, ..., y_m1, y_12, ..., y_mn]ᵗ`.
pub fn vec(y: &Matrix) -> Vector {
    Vector::from_column_slice(y.as_slice())
}

/// Inverse of [`vec`] for an `rows x cols` matrix.
pub fn unvec(v: &Vector, rows: usize, cols: usize) -> Result<Matrix> {
    if v.len() != rows * cols {
        return shape(format!("vector of length {} is not {rows}x{cols}", v.len()));
    }
    Ok(Matrix::from_column_slice(rows, cols, v.as_slice()))
}

/// Realignment `R(Z)` of an `(mn) x (mn)` matrix viewed as `m x m` blocks of
/// size `n x n`. Row `bi + m*bj` of the result is `vec(Z_{bi,bj})ᵗ`.
pub fn realign(z: &Matrix, outer: usize, inner: usize) -> Result<Matrix> {
    let size = outer * inner;
    if outer == 0 || inner == 0 || z.nrows() != size || z.ncols() != size {
        return shape(format!(
            "cannot realign a {}x{} matrix as {outer}x{outer} blocks of {inner}x{inner}",
            z.nrows(),
            z.ncols()
        ));
    }
    let mut out = Matrix::zeros(outer * outer, inner * inner);
    for bj in 0..outer {
        for bi in 0..outer {
            let row = bi + outer * bj;
            for c in 0..inner {
                for r in 0..inner {
                    out[(row, r + inner * c)] = z[(bi * inner + r, bj * inner + c)];
                }
            }
        }
    }
    Ok(out)
}

/// Re-blocks a multiparty matrix so that `party` (0-based) forms the outer
/// `d_i x d_i` block structure and the remaining parties, in their original
/// order, index the inner blocks. `realign(bipartite_block(M), d_i, d/d_i)`
/// is the realignment of `M_{i|î}`.
pub fn bipartite_block(m: &Matrix, dims: &[usize], party: usize) -> Result<Matrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || party >= dims.len() {
        return domain(format!("party {party} invalid for dims {dims:?}"));
    }
    if m.nrows() != total || m.ncols() != total {
        return shape(format!(
            "{}x{} matrix for parties {dims:?} (size {total})",
            m.nrows(),
            m.ncols()
        ));
    }
    let perm = party_first_permutation(dims, party);
    Ok(Matrix::from_fn(total, total, |r, c| m[(perm[r], perm[c])]))
}

/// `perm[new] = old` for moving `party` to the most significant position.
fn party_first_permutation(dims: &[usize], party: usize) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let n = dims.len();
    // weights of the original (party 1 slowest) layout
    let mut weight = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        weight[k] = weight[k + 1] * dims[k + 1];
    }
    let rest: Vec<usize> = (0..n).filter(|&k| k != party).collect();
    let rest_size = total / dims[party];
    let mut perm = Vec::with_capacity(total);
    for new in 0..total {
        let ip = new / rest_size;
        let mut rem = new % rest_size;
        let mut old = ip * weight[party];
        for &k in rest.iter().rev() {
            old += (rem % dims[k]) * weight[k];
            rem /= dims[k];
        }
        perm.push(old);
    }
    perm
}

/// Full singular value decomposition `M = U Σ V†`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows x rows` unitary.
    pub u: Matrix,
    /// `min(rows, cols)` singular values, descending.
    pub sigma: Vec<f64>,
    /// `cols x cols` unitary.
    pub v: Matrix,
}

impl Svd {
    /// Rebuilds `U Σ V†`.
    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.u.nrows(), self.v.nrows());
        let mut s = Matrix::zeros(m, n);
        for (k, &x) in self.sigma.iter().enumerate() {
            s[(k, k)] = Complex64::new(x, 0.0);
        }
        &self.u * s * self.v.adjoint()
    }
}

/// Thin SVD: `u` is `m x k`, `v` is `n x k` with `k = min(m, n)`.
pub fn svd_thin(m: &Matrix) -> Result<Svd> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return domain("SVD of an empty matrix");
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("SVD input has non-finite entries".into()));
    }
    if rows < cols {
        let t = svd_thin(&m.adjoint())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    // tall: reduce to the square triangular factor first
    let (q, a) = if rows > cols {
        let qr = QR::new(m.clone());
        (Some(qr.q()), qr.r())
    } else {
        (None, m.clone())
    };
    let (w, sigma, v) = jacobi_svd(a)?;
    let u = match q {
        Some(q) => q * w,
        None => w,
    };
    Ok(Svd { u, sigma, v })
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix, sorted descending.
fn jacobi_svd(mut a: Matrix) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let n = a.ncols();
    let mut v = Matrix::identity(n, n);
    let mut converged = false;
    // columns this far below the largest one are numerically zero
    let floor = fro(&a) * 1e-150;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (np, nq) = (a.column(p).norm(), a.column(q).norm());
                if np <= floor || nq <= floor {
                    continue;
                }
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= JACOBI_EPS * np * nq {
                    continue;
                }
                let (alpha, beta) = (np * np, nq * nq);
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("Jacobi SVD did not converge".into()));
    }
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let v = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let top = sigma[0];
    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    for (&k, &s) in order.iter().zip(&sigma) {
        if s > top * f64::EPSILON * n as f64 && s > f64::MIN_POSITIVE {
            cols.push(a.column(k) / Complex64::new(s, 0.0));
        } else {
            break;
        }
    }
    let u = if cols.is_empty() {
        Matrix::identity(n, n)
    } else {
        complete_basis(&Matrix::from_columns(&cols))
    };
    Ok((u, sigma, v))
}

/// Column pair update `[x_p, x_q] <- [c x_p - s ē x_q, s e x_p + c x_q]`
/// with `e` the phase of `x_p† x_q`; zeroes the pair's inner product.
fn rotate(x: &mut Matrix, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
    for r in 0..x.nrows() {
        let xp = x[(r, p)];
        let xq = x[(r, q)] * phase.conj();
        x[(r, p)] = c * xp - s * xq;
        x[(r, q)] = (s * xp + c * xq) * phase;
    }
}

/// Full SVD with square unitary `U` and `V`.
pub fn svd(m: &Matrix) -> Result<Svd> {
    let thin = svd_thin(m)?;
    Ok(Svd {
        u: complete_basis(&thin.u),
        sigma: thin.sigma,
        v: complete_basis(&thin.v),
    })
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return domain("singular values of an empty matrix");
    }
    Ok(svd_thin(m)?.sigma)
}

/// Extends orthonormal columns to a square unitary.
pub fn complete_basis(q: &Matrix) -> Matrix {
    let n = q.nrows();
    let mut cols: Vec<Vector> = q.column_iter().map(|c| c.into_owned()).collect();
    while cols.len() < n {
        // pick the standard basis vector with the largest remaining component
        let mut best: Option<(f64, Vector)> = None;
        for j in 0..n {
            let mut e = Vector::zeros(n);
            e[j] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in &cols {
                    let p = c.dotc(&e);
                    e -= c * p;
                }
            }
            let nrm = e.norm();
            if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
                best = Some((nrm, e));
            }
        }
        let (nrm, e) = best.expect("n > 0");
        cols.push(e / Complex64::new(nrm, 0.0));
    }
    Matrix::from_columns(&cols)
}

/// Count of singular values above `tol * sigma_1` (zero for the zero matrix).
pub fn numerical_rank(m: &Matrix, tol: f64) -> Result<usize> {
    if tol <= 0.0 || !tol.is_finite() {
        return domain(format!("rank tolerance must be positive, got {tol}"));
    }
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let sv = singular_values(m)?;
    Ok(rank_of(&sv, tol))
}

pub(crate) fn rank_of(sv: &[f64], tol: f64) -> usize {
    match sv.first() {
        Some(&s1) if s1 > 0.0 => sv.iter().filter(|&&s| s > tol * s1).count(),
        _ => 0,
    }
}

/// Ratio `sigma_2 / sigma_1` (zero when there is no second value).
pub fn rank_one_gap(m: &Matrix) -> Result<f64> {
    let sv = singular_values(m)?;
    Ok(match (sv.first(), sv.get(1)) {
        (Some(&s1), Some(&s2)) if s1 > 0.0 => s2 / s1,
        _ => 0.0,
    })
}

/// Hermitian eigendecomposition `H = Q Λ Q†` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Tolerance on `max |H - H†|` accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first;
/// deviations from Hermiticity above [`HERMITIAN_TOL`] are rejected.
pub fn eig_hermitian(h: &Matrix) -> Result<HermitianEigen> {
    if !h.is_square() || h.nrows() == 0 {
        return shape(format!("eigendecomposition of a {:?} matrix", h.shape()));
    }
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOL {
        return domain(format!("matrix is not Hermitian (max |H - H†| = {dev:e})"));
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let dec = SymmetricEigen::try_new(sym, f64::EPSILON, EIG_MAX_ITERS)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
    let vals: Vec<f64> = dec.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let values = order.iter().map(|&k| vals[k]).collect();
    let vectors = Matrix::from_fn(h.nrows(), h.ncols(), |r, c| dec.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// `max |H - H†|` entrywise.
pub fn hermitian_deviation(h: &Matrix) -> f64 {
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Unitary polar factor `W V†` of `M = W S V†`.
pub fn polar_unitary(m: &Matrix) -> Result<Matrix> {
    let s = svd_thin(m)?;
    if m.is_square() {
        return Ok(&s.u * s.v.adjoint());
    }
    domain("polar factor of a non-square matrix")
}

/// `max |M M† - I|` entrywise.
pub fn unitarity_error(m: &Matrix) -> f64 {
    let n = m.nrows();
    (m * m.adjoint() - Matrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of a matrix.
pub fn fro(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}



#[cfg(test)]
mod svd_stress {
    use super::*;
    use crate::random::{ginibre, stream};

    #[test]
    fn rank_deficient_complex_inputs() {
        for seed in 0..300u64 {
            let mut rng = stream(99, seed);
            let r = 1 + (seed % 3) as usize;
            let (a, b) = (1 + (seed % 7) as usize * 2, 1 + (seed % 11) as usize * 3);
            let m = ginibre(a, r, &mut rng) * ginibre(r, b, &mut rng);
            let t = svd_thin(&m).unwrap();
            let k = t.sigma.len();
            let sig = Matrix::from_diagonal(&Vector::from_iterator(k, t.sigma.iter().map(|&x| Complex64::new(x, 0.0))));
            assert!(fro(&(&t.u * sig * t.v.adjoint() - &m)) <= 1e-12 * fro(&m));
            assert!(fro(&(t.u.adjoint() * &t.u - Matrix::identity(k, k))) < 1e-12);
            assert!(fro(&(t.v.adjoint() * &t.v - Matrix::identity(k, k))) < 1e-12);
            assert!(t.sigma.windows(2).all(|w| w[0] >= w[1]));
            if k > r {
                assert!(t.sigma[r] <= 1e-13 * t.sigma[0]);
            }
        }
    }
}
