//! Tensor-product detection and factor extraction through realignment.
//!
//! A square matrix on `d_1 x ... x d_N` parties is a Kronecker product iff
//! the realignment of every re-blocking `M_{i|î}` has rank one. Factors come
//! from the leading singular triplet of the realigned matrix, which gives the
//! nearest Kronecker product in Frobenius norm.

use num_complex::Complex64;

use crate::error::{domain, shape, Error, Result};
use crate::linalg::{bipartite_block, fro, kronecker_all, realign, singular_values, svd_thin, unvec};
use crate::tensor::{Matrix, Vector};

/// Relative Gram-matrix deviation accepted by [`unitarize_factors`].
pub const UNITARIZE_TOL: f64 = 1e-8;

/// Result of a successful multiparty factorization.
#[derive(Debug, Clone)]
pub struct KronFactorization {
    /// `m_1, ..., m_N` with `M ≈ m_1 ⊗ ... ⊗ m_N`.
    pub factors: Vec<Matrix>,
    /// `‖M - ⊗ m_i‖ / ‖M‖`.
    pub residual: f64,
    /// `σ_2 / σ_1` of `R(M_{i|î})` for each party.
    pub rank_gaps: Vec<f64>,
    /// Whether every factor is numerically invertible.
    pub invertible: bool,
}

/// Outcome of [`is_kron`].
#[derive(Debug, Clone, PartialEq)]
pub struct KronTest {
    pub is_kron: bool,
    pub rank_gaps: Vec<f64>,
}

fn check_square(m: &Matrix, dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return domain(format!("invalid party dimensions {dims:?}"));
    }
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return shape(format!(
            "{}x{} matrix for parties {dims:?} (needs {total}x{total})",
            m.nrows(),
            m.ncols()
        ));
    }
    Ok(total)
}

/// `σ_2/σ_1` of `R(M_{i|î})` for every party; `None` when `M` is zero.
pub fn realignment_gaps(m: &Matrix, dims: &[usize]) -> Result<Option<Vec<f64>>> {
    let total = check_square(m, dims)?;
    if fro(m) == 0.0 {
        return Ok(None);
    }
    let mut gaps = Vec::with_capacity(dims.len());
    for (i, &d) in dims.iter().enumerate() {
        if dims.len() == 1 {
            gaps.push(0.0);
            break;
        }
        let r = realign(&bipartite_block(m, dims, i)?, d, total / d)?;
        let sv = singular_values(&r)?;
        gaps.push(sv.get(1).map_or(0.0, |s2| s2 / sv[0]));
    }
    Ok(Some(gaps))
}

/// Decides whether `M` is numerically `m_1 ⊗ ... ⊗ m_N`: every realigned
/// block must have numerical rank one at relative tolerance `tol`.
pub fn is_kron(m: &Matrix, dims: &[usize], tol: f64) -> Result<KronTest> {
    if tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    Ok(match realignment_gaps(m, dims)? {
        None => KronTest {
            is_kron: false,
            rank_gaps: vec![f64::INFINITY; dims.len()],
        },
        Some(gaps) => KronTest {
            is_kron: gaps.iter().all(|&g| g <= tol),
            rank_gaps: gaps,
        },
    })
}

/// Nearest Kronecker product `m1 ⊗ m2` to a `(d1 d2) x (d1 d2)` matrix.
///
/// Returns the factors and the relative residual `‖M - m1 ⊗ m2‖ / ‖M‖`.
pub fn factorize_bipartite(m: &Matrix, d1: usize, d2: usize) -> Result<(Matrix, Matrix, f64)> {
    check_square(m, &[d1, d2])?;
    let norm = fro(m);
    if norm == 0.0 {
        return domain("cannot factorize the zero matrix");
    }
    let r = realign(m, d1, d2)?;
    let s = svd_thin(&r)?;
    let root = Complex64::new(s.sigma[0].sqrt(), 0.0);
    let u1: Vector = s.u.column(0) * root;
    let v1: Vector = s.v.column(0).map(|z| z.conj()) * root;
    let m1 = unvec(&u1, d1, d1)?;
    let m2 = unvec(&v1, d2, d2)?;
    let residual = fro(&(m - crate::linalg::kronecker(&m1, &m2))) / norm;
    Ok((m1, m2, residual))
}

/// Largest-modulus entry (first in column-major order on ties).
fn leading_entry(m: &Matrix) -> Complex64 {
    let mut best = Complex64::new(0.0, 0.0);
    for z in m.iter() {
        if z.norm() > best.norm() * (1.0 + 1e-12) {
            best = *z;
        }
    }
    best
}

/// Splits `M` into one factor per party by peeling party 1 outward.
///
/// Every factor but the last is scaled to Frobenius norm `√d_i` with its
/// largest entry real and positive; the accumulated scalar sits on the last
/// factor. Fails with [`Error::NotKronecker`] naming the first party whose
/// realignment is not rank one at `tol`.
pub fn factorize_multiparty(m: &Matrix, dims: &[usize], tol: f64) -> Result<KronFactorization> {
    let total = check_square(m, dims)?;
    let norm = fro(m);
    if norm == 0.0 {
        return domain("cannot factorize the zero matrix");
    }
    let test = is_kron(m, dims, tol)?;
    if let Some((party, &gap)) = test.rank_gaps.iter().enumerate().find(|(_, &g)| g > tol) {
        return Err(Error::NotKronecker { party, gap });
    }

    let mut factors = Vec::with_capacity(dims.len());
    let mut rest = m.clone();
    let mut rest_size = total;
    for &d in &dims[..dims.len() - 1] {
        rest_size /= d;
        let (m1, m2, _) = factorize_bipartite(&rest, d, rest_size)?;
        let lead = leading_entry(&m1);
        let scale = (d as f64).sqrt() / fro(&m1);
        // m1 * g and m2 / g keep the product fixed
        let g = Complex64::new(scale, 0.0) * lead.conj() / lead.norm();
        factors.push(m1 * g);
        rest = m2 / g;
    }
    factors.push(rest);

    let residual = fro(&(m - kronecker_all(&factors))) / norm;
    if residual > 10.0 * tol {
        let (party, gap) = test
            .rank_gaps
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        return Err(Error::NotKronecker { party, gap: gap.max(residual) });
    }
    let invertible = factors.iter().all(|f| {
        singular_values(f).is_ok_and(|sv| sv[sv.len() - 1] > 1e-10 * sv[0])
    });
    Ok(KronFactorization {
        factors,
        residual,
        rank_gaps: test.rank_gaps,
        invertible,
    })
}

/// Rescales factors of a unitary Kronecker product so each one is unitary.
///
/// Each `m_i m_i†` must be a scalar `a_i I`; dividing by `√a_i` leaves the
/// product unchanged because the `a_i` multiply to one.
pub fn unitarize_factors(f: &KronFactorization) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(f.factors.len());
    let mut prod = 1.0;
    for (i, m) in f.factors.iter().enumerate() {
        let d = m.nrows();
        let gram = m * m.adjoint();
        let a = gram.trace().re / d as f64;
        if a <= 0.0 {
            return domain(format!("factor {i} is zero"));
        }
        let dev = fro(&(&gram - Matrix::identity(d, d) * Complex64::new(a, 0.0))) / (a * (d as f64).sqrt());
        if dev > UNITARIZE_TOL {
            return domain(format!(
                "factor {i} is not a multiple of a unitary (relative Gram deviation {dev:e})"
            ));
        }
        prod *= a;
        out.push(m / Complex64::new(a.sqrt(), 0.0));
    }
    if (prod - 1.0).abs() > UNITARIZE_TOL {
        return domain(format!("the product is not unitary (scale {prod})"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kronecker, unitarity_error};
    use crate::random::{conditioned_invertible, ginibre, haar_unitary, stream};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn swap12_i2() -> Matrix {
        let mut swap = Matrix::zeros(4, 4);
        for (a, b) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            swap[(a, b)] = c(1.0, 0.0);
        }
        kronecker(&swap, &Matrix::identity(2, 2))
    }

    #[test]
    fn is_kron_examples() {
        let mut rng = stream(11, 0);
        let ms: Vec<Matrix> = (0..3).map(|_| ginibre(2, 2, &mut rng)).collect();
        let t = is_kron(&kronecker_all(&ms), &[2, 2, 2], 1e-8).unwrap();
        assert!(t.is_kron);
        assert!(t.rank_gaps.iter().all(|&g| g <= 1e-12), "{:?}", t.rank_gaps);

        let t = is_kron(&swap12_i2(), &[2, 2, 2], 1e-8).unwrap();
        assert!(!t.is_kron);
        assert!((t.rank_gaps[0] - 1.0).abs() < 1e-12);
        assert!(t.rank_gaps[2] < 1e-12);

        assert!(is_kron(&Matrix::identity(8, 8), &[2, 2, 2], 1e-8).unwrap().is_kron);
        assert!(!is_kron(&Matrix::zeros(4, 4), &[2, 2], 1e-8).unwrap().is_kron);
        assert!(is_kron(&Matrix::identity(4, 4), &[2, 3], 1e-8).is_err());
    }

    #[test]
    fn bipartite_recovers_up_to_scalar() {
        let mut rng = stream(12, 0);
        let a = ginibre(2, 2, &mut rng);
        let b = ginibre(3, 3, &mut rng);
        let (m1, m2, res) = factorize_bipartite(&kronecker(&a, &b), 2, 3).unwrap();
        assert!(res <= 1e-12, "{res}");
        let s = m1[(0, 0)] / a[(0, 0)];
        assert!(fro(&(&m1 - &a * s)) < 1e-12 * fro(&m1));
        assert!(fro(&(&m2 - &b / s)) < 1e-12 * fro(&m2));
        assert!(factorize_bipartite(&Matrix::zeros(6, 6), 2, 3).is_err());
    }

    #[test]
    fn bipartite_noise_residual_scales_with_noise() {
        let mut rng = stream(13, 0);
        let m = kronecker(&ginibre(2, 2, &mut rng), &ginibre(2, 2, &mut rng));
        let noise = ginibre(4, 4, &mut rng);
        let noisy = &m + noise * c(1e-6 * fro(&m) / 4.0, 0.0);
        let (_, _, res) = factorize_bipartite(&noisy, 2, 2).unwrap();
        assert!(res > 1e-8 && res < 1e-5, "{res}");
    }

    #[test]
    fn multiparty_unitary_products() {
        for seed in 0..20 {
            let mut rng = stream(14, seed);
            let us: Vec<Matrix> = (0..4).map(|_| haar_unitary(2, &mut rng)).collect();
            let m = kronecker_all(&us);
            let f = factorize_multiparty(&m, &[2, 2, 2, 2], 1e-8).unwrap();
            assert!(f.residual <= 1e-10, "{}", f.residual);
            assert!(f.invertible);
            let un = unitarize_factors(&f).unwrap();
            assert!(un.iter().all(|u| unitarity_error(u) < 1e-8));
            assert!(fro(&(kronecker_all(&un) - &m)) < 1e-10);
        }
    }

    #[test]
    fn multiparty_rejects_controlled_z() {
        let mut m = Matrix::identity(8, 8);
        m[(7, 7)] = c(-1.0, 0.0);
        let t = is_kron(&m, &[2, 2, 2], 1e-8).unwrap();
        assert!(t.rank_gaps.iter().all(|&g| g > 1e-8), "{:?}", t.rank_gaps);
        match factorize_multiparty(&m, &[2, 2, 2], 1e-8) {
            Err(Error::NotKronecker { party, gap }) => {
                assert_eq!(party, 0);
                assert!(gap > 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gauge_is_deterministic() {
        let mut rng = stream(15, 0);
        let ms: Vec<Matrix> = (0..3).map(|_| conditioned_invertible(2, 0.5, 2.0, &mut rng)).collect();
        let m = kronecker_all(&ms);
        let f = factorize_multiparty(&m, &[2, 2, 2], 1e-8).unwrap();
        let g = factorize_multiparty(&(&m * c(0.0, 3.0)), &[2, 2, 2], 1e-8).unwrap();
        for k in 0..2 {
            assert!((fro(&f.factors[k]) - 2f64.sqrt()).abs() < 1e-12);
            assert!(fro(&(&f.factors[k] - &g.factors[k])) < 1e-10);
        }
        assert!(fro(&(&f.factors[2] * c(0.0, 3.0) - &g.factors[2])) < 1e-10);
    }

    #[test]
    fn unitarize_examples() {
        let mut rng = stream(16, 0);
        let u1 = haar_unitary(2, &mut rng);
        let u2 = haar_unitary(3, &mut rng);
        let f = KronFactorization {
            factors: vec![&u1 * c(2.0, 0.0), &u2 * c(0.5, 0.0)],
            residual: 0.0,
            rank_gaps: vec![0.0, 0.0],
            invertible: true,
        };
        let un = unitarize_factors(&f).unwrap();
        assert!(fro(&(&un[0] - &u1)) < 1e-12 && fro(&(&un[1] - &u2)) < 1e-12);

        let d = Matrix::from_diagonal(&Vector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let m = kronecker(&d, &Matrix::identity(2, 2));
        let f = factorize_multiparty(&m, &[2, 2], 1e-8).unwrap();
        assert!(matches!(unitarize_factors(&f), Err(Error::Domain(_))));
    }
}
