use super::{Certificate, CheckOptions, Invariant, InvariantValue, WitnessMode};
use crate::error::{shape, Result};
use crate::linalg::{eig_hermitian, rank_of, singular_values};
use crate::tensor::{unfold, Matrix, Tensor};

/// Singular values of every unfolding, padded with zeros to `d_i`.
pub(crate) fn unfolding_spectra(t: &Tensor) -> Result<Vec<Vec<f64>>> {
    (0..t.order())
        .map(|i| {
            let mut sv = singular_values(&unfold(t, i)?)?;
            sv.resize(t.dims()[i], 0.0);
            Ok(sv)
        })
        .collect()
}

fn values_differ(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, &x| m.max(x.abs()));
    a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (x - y).abs() > tol * scale)
}

/// Unfolding ranks (both modes) and unfolding singular values (LU mode).
/// Returns the first violated invariant, or `None` when all agree.
pub fn pure_necessary_invariants(
    x: &Tensor,
    y: &Tensor,
    mode: WitnessMode,
    opts: &CheckOptions,
) -> Result<Option<Certificate>> {
    if x.dims() != y.dims() {
        return shape(format!("tensors of dims {:?} and {:?}", x.dims(), y.dims()));
    }
    let sx = unfolding_spectra(x)?;
    let sy = unfolding_spectra(y)?;
    for i in 0..x.order() {
        let (rx, ry) = (rank_of(&sx[i], opts.tol), rank_of(&sy[i], opts.tol));
        if rx != ry {
            return Ok(Some(Certificate {
                invariant: Invariant::UnfoldingRank,
                mode: Some(i),
                left: InvariantValue::Rank(rx),
                right: InvariantValue::Rank(ry),
            }));
        }
    }
    if mode == WitnessMode::Unitary {
        for i in 0..x.order() {
            if values_differ(&sx[i], &sy[i], opts.value_tol) {
                return Ok(Some(Certificate {
                    invariant: Invariant::UnfoldingSingularValues,
                    mode: Some(i),
                    left: InvariantValue::Values(sx[i].clone()),
                    right: InvariantValue::Values(sy[i].clone()),
                }));
            }
        }
    }
    Ok(None)
}

/// Sorted spectra of two density matrices; a mismatch certifies LU inequivalence.
pub fn mixed_lu_invariants(rho: &Matrix, rho_prime: &Matrix, opts: &CheckOptions) -> Result<Option<Certificate>> {
    if rho.shape() != rho_prime.shape() {
        return shape("density matrices of different sizes");
    }
    let a = eig_hermitian(rho)?.values;
    let b = eig_hermitian(rho_prime)?.values;
    if values_differ(&a, &b, opts.value_tol) {
        return Ok(Some(Certificate {
            invariant: Invariant::Spectrum,
            mode: None,
            left: InvariantValue::Values(a),
            right: InvariantValue::Values(b),
        }));
    }
    Ok(None)
}
