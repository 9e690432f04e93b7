//! Quantum states and their coefficient tensors.
//!
//! Pure amplitudes are held in ket order (`|j_1 ... j_N>`, party 1 slowest),
//! the same order as density-matrix rows. Coefficient tensors use the crate's
//! canonical layout (first index fastest).

use num_complex::Complex64;

use crate::error::{domain, shape, Error, Result};
use crate::linalg::{eig_hermitian, hermitian_deviation, singular_values};
use crate::tensor::{apply_local, Matrix, Tensor, Vector, MAX_ORDER};

/// Amplitude norm deviation accepted silently.
pub const NORM_TOL: f64 = 1e-10;
/// Amplitude norm deviation that is repaired (with a warning) instead of rejected.
pub const RENORMALIZE_TOL: f64 = 1e-6;
/// Hermiticity, trace and positivity tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure { dims: Vec<usize>, amplitudes: Vector },
    Mixed { dims: Vec<usize>, rho: Matrix },
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.len() > MAX_ORDER || dims.contains(&0) {
        return domain(format!("invalid party dimensions {dims:?}"));
    }
    Ok(dims.iter().product())
}

impl QuantumState {
    /// Pure state from ket-ordered amplitudes. Norms within
    /// [`RENORMALIZE_TOL`] of one are rescaled with a warning.
    pub fn pure(dims: Vec<usize>, amplitudes: Vector) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return shape(format!("{} amplitudes for dims {dims:?}", amplitudes.len()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotAState("non-finite amplitude".into()));
        }
        let norm = amplitudes.norm();
        let dev = (norm - 1.0).abs();
        let amplitudes = if dev <= NORM_TOL {
            amplitudes
        } else if dev < RENORMALIZE_TOL {
            log::warn!("renormalizing amplitudes with norm {norm}");
            amplitudes / Complex64::new(norm, 0.0)
        } else {
            return Err(Error::NotAState(format!("amplitude norm is {norm}, expected 1")));
        };
        Ok(QuantumState::Pure { dims, amplitudes })
    }

    /// Mixed state; `rho` must be Hermitian, unit-trace and positive semidefinite.
    pub fn mixed(dims: Vec<usize>, rho: Matrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if rho.nrows() != total || rho.ncols() != total {
            return shape(format!("{:?} density matrix for dims {dims:?}", rho.shape()));
        }
        validate_density(&rho)?;
        Ok(QuantumState::Mixed { dims, rho })
    }

    pub fn kind(&self) -> StateKind {
        match self {
            QuantumState::Pure { .. } => StateKind::Pure,
            QuantumState::Mixed { .. } => StateKind::Mixed,
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            QuantumState::Pure { dims, .. } | QuantumState::Mixed { dims, .. } => dims,
        }
    }

    /// `|ψ><ψ|` for pure states, `ρ` otherwise.
    pub fn density(&self) -> Matrix {
        match self {
            QuantumState::Pure { amplitudes, .. } => amplitudes * amplitudes.adjoint(),
            QuantumState::Mixed { rho, .. } => rho.clone(),
        }
    }
}

fn validate_density(rho: &Matrix) -> Result<()> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NotAState("non-finite density matrix entry".into()));
    }
    let dev = hermitian_deviation(rho);
    if dev > DENSITY_TOL {
        return Err(Error::NotAState(format!("density matrix is not Hermitian (deviation {dev:e})")));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::NotAState(format!("density matrix has trace {tr}")));
    }
    let low = eig_hermitian(rho)?.values[0];
    if low < -DENSITY_TOL {
        return Err(Error::NotAState(format!("density matrix has eigenvalue {low:e}")));
    }
    Ok(())
}

/// Ket position of the canonical multi-index `idx` (party 1 slowest).
pub fn ket_index(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// Coefficient tensor `α_{j_1...j_N}` of a pure state.
pub fn pure_to_tensor(s: &QuantumState) -> Result<Tensor> {
    match s {
        QuantumState::Pure { dims, amplitudes } => {
            Tensor::from_fn(dims.clone(), |idx| amplitudes[ket_index(idx, dims)])
        }
        QuantumState::Mixed { .. } => domain("expected a pure state"),
    }
}

/// Ket-ordered amplitudes of a coefficient tensor.
pub fn tensor_to_amplitudes(t: &Tensor) -> Vector {
    let dims = t.dims();
    let mut out = Vector::zeros(t.len());
    let mut idx = vec![0; dims.len()];
    for &z in t.data() {
        out[ket_index(&idx, dims)] = z;
        crate::tensor::advance(&mut idx, dims);
    }
    out
}

/// Pure state whose coefficient tensor is `t`.
pub fn tensor_to_pure(t: &Tensor) -> Result<QuantumState> {
    QuantumState::pure(t.dims().to_vec(), tensor_to_amplitudes(t))
}

/// Generalized Gell-Mann matrices: identity, symmetric, antisymmetric, diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct GellMannBasis {
    pub d: usize,
    pub elements: Vec<Matrix>,
}

impl GellMannBasis {
    /// `Tr(λ_i²)`: `d` for the identity, 2 otherwise.
    pub fn norm_sq(&self, i: usize) -> f64 {
        if i == 0 { self.d as f64 } else { 2.0 }
    }
}

pub fn gellmann(d: usize) -> Result<GellMannBasis> {
    if d < 2 {
        return domain(format!("Gell-Mann basis needs d >= 2, got {d}"));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut elements = vec![Matrix::identity(d, d)];
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = Matrix::zeros(d, d);
        m[(j, k)] = one;
        m[(k, j)] = one;
        elements.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = Matrix::zeros(d, d);
        m[(j, k)] = -i;
        m[(k, j)] = i;
        elements.push(m);
    }
    for l in 1..d {
        let s = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = Matrix::zeros(d, d);
        for mm in 0..l {
            m[(mm, mm)] = Complex64::new(s, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * s, 0.0);
        elements.push(m);
    }
    Ok(GellMannBasis { d, elements })
}

/// Density matrix as an order-N tensor whose mode k runs over the entry
/// pairs `(r_k, c_k)` of party k, stacked as `r_k + d_k c_k`.
fn density_as_tensor(rho: &Matrix, dims: &[usize]) -> Result<Tensor> {
    let sq: Vec<usize> = dims.iter().map(|d| d * d).collect();
    Tensor::from_fn(sq, |idx| {
        let (mut r, mut c) = (0, 0);
        for (&p, &d) in idx.iter().zip(dims) {
            r = r * d + p % d;
            c = c * d + p / d;
        }
        rho[(r, c)]
    })
}

fn tensor_as_density(t: &Tensor, dims: &[usize]) -> Matrix {
    let total: usize = dims.iter().product();
    let mut rho = Matrix::zeros(total, total);
    let mut idx = vec![0; dims.len()];
    for &z in t.data() {
        let (mut r, mut c) = (0, 0);
        for (&p, &d) in idx.iter().zip(dims) {
            r = r * d + p % d;
            c = c * d + p / d;
        }
        rho[(r, c)] = z;
        crate::tensor::advance(&mut idx, t.dims());
    }
    rho
}

/// Real coefficient tensor `x_{i_1...i_N}` of `ρ = Σ x λ_{i_1} ⊗ ... ⊗ λ_{i_N}`,
/// from the diagonal Gram system `x = Tr(ρ ⊗λ) / Π Tr(λ_{i_k}²)`.
pub fn density_to_tensor(s: &QuantumState) -> Result<Tensor> {
    let QuantumState::Mixed { dims, rho } = s else {
        return domain("expected a mixed state");
    };
    coefficients_of(rho, dims)
}

/// Gell-Mann coefficients of any `Π d x Π d` Hermitian matrix.
pub fn coefficients_of(rho: &Matrix, dims: &[usize]) -> Result<Tensor> {
    let dev = hermitian_deviation(rho);
    if dev > DENSITY_TOL {
        return domain(format!("matrix is not Hermitian (deviation {dev:e})"));
    }
    let mut ops = Vec::with_capacity(dims.len());
    for &d in dims {
        let basis = gellmann(d)?;
        ops.push(Matrix::from_fn(d * d, d * d, |i, p| {
            let (r, c) = (p % d, p / d);
            basis.elements[i][(c, r)] / basis.norm_sq(i)
        }));
    }
    let x = apply_local(&density_as_tensor(rho, dims)?, &ops)?;
    let scale = x.data().iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let worst = x.data().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > DENSITY_TOL * scale {
        return Err(Error::Numeric(format!("coefficient with imaginary part {worst:e}")));
    }
    let real: Vec<Complex64> = x.data().iter().map(|z| Complex64::new(z.re, 0.0)).collect();
    Tensor::new(x.dims().to_vec(), real)
}

/// `Σ x λ_{i_1} ⊗ ... ⊗ λ_{i_N}` without validation.
pub fn matrix_from_coefficients(t: &Tensor, dims: &[usize]) -> Result<Matrix> {
    let sq: Vec<usize> = dims.iter().map(|d| d * d).collect();
    if t.dims() != sq.as_slice() {
        return shape(format!("coefficient tensor {:?} for parties {dims:?}", t.dims()));
    }
    let mut ops = Vec::with_capacity(dims.len());
    for &d in dims {
        let basis = gellmann(d)?;
        ops.push(Matrix::from_fn(d * d, d * d, |p, i| basis.elements[i][(p % d, p / d)]));
    }
    Ok(tensor_as_density(&apply_local(t, &ops)?, dims))
}

/// Inverse of [`density_to_tensor`]; fails if the result is not a state.
pub fn tensor_to_density(t: &Tensor, dims: &[usize]) -> Result<QuantumState> {
    check_dims(dims)?;
    let rho = matrix_from_coefficients(t, dims)?;
    QuantumState::mixed(dims.to_vec(), rho)
}

/// Matrix `L` of the map `λ_i -> M λ_i M†` in Gell-Mann coordinates:
/// `M λ_i M† = Σ_j L_ji λ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointRep {
    pub l: Matrix,
}

impl AdjointRep {
    /// `max_i ‖M λ_i M† - Σ_j L_ji λ_j‖`.
    pub fn residual(&self, m: &Matrix) -> Result<f64> {
        let basis = gellmann(m.nrows())?;
        let mut worst: f64 = 0.0;
        for (i, li) in basis.elements.iter().enumerate() {
            let mut diff = m * li * m.adjoint();
            for (j, lj) in basis.elements.iter().enumerate() {
                diff -= lj * self.l[(j, i)];
            }
            worst = worst.max(crate::linalg::fro(&diff));
        }
        Ok(worst)
    }
}

pub fn adjoint_rep(m: &Matrix, d: usize) -> Result<AdjointRep> {
    if m.nrows() != d || m.ncols() != d {
        return shape(format!("{:?} operator for local dimension {d}", m.shape()));
    }
    let sv = singular_values(m)?;
    if sv[0] == 0.0 || sv[d - 1] <= 1e-12 * sv[0] {
        return domain("adjoint representation of a singular operator");
    }
    let basis = gellmann(d)?;
    let n = d * d;
    let images: Vec<Matrix> = basis.elements.iter().map(|li| m * li * m.adjoint()).collect();
    let l = Matrix::from_fn(n, n, |j, i| {
        (&basis.elements[j] * &images[i]).trace() / basis.norm_sq(j)
    });
    Ok(AdjointRep { l })
}
