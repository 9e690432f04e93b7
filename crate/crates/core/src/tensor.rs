//! Dense complex tensors and their mode-n matricizations.
//!
//! Entries are stored in the canonical linearization: the multi-index
//! `(i_1, ..., i_N)` (0-based) lives at `sum_k i_k * beta_k` with
//! `beta_k = d_1 * ... * d_{k-1}`, so the first index runs fastest. The mode-n
//! unfolding uses the same weights with mode `n` skipped, which makes the
//! columns of `X_(n)` the mode-n fibers in order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, shape, Result};

/// Dense complex matrix used throughout the crate.
pub type Matrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type Vector = DVector<Complex64>;

/// Largest supported tensor order.
pub const MAX_ORDER: usize = 8;

/// Dense complex N-way array.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

impl Tensor {
    /// Builds a tensor from entries in canonical (first index fastest) order.
    pub fn new(dims: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        check_dims(&dims)?;
        let len: usize = dims.iter().product();
        if data.len() != len {
            return shape(format!(
                "tensor with dims {dims:?} needs {len} entries, got {}",
                data.len()
            ));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        let len = dims.iter().product();
        Ok(Self {
            dims,
            data: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    /// Builds a tensor by evaluating `f` at every 0-based multi-index.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> Complex64) -> Result<Self> {
        let mut t = Self::zeros(dims)?;
        let mut idx = vec![0usize; t.dims.len()];
        for slot in t.data.iter_mut() {
            *slot = f(&idx);
            advance(&mut idx, &t.dims);
        }
        Ok(t)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Entries in canonical order.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Entry at a 0-based multi-index.
    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Complex64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut off = 0;
        let mut stride = 1;
        for (&i, &d) in idx.iter().zip(&self.dims) {
            debug_assert!(i < d);
            off += i * stride;
            stride *= d;
        }
        off
    }

    pub fn scale(&self, s: Complex64) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        if self.dims != other.dims {
            return shape(format!("dims {:?} vs {:?}", self.dims, other.dims));
        }
        Ok(Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.dims != other.dims {
            return shape(format!("dims {:?} vs {:?}", self.dims, other.dims));
        }
        Ok(Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Hermitian inner product `<self, other> = sum conj(self) * other`.
    pub fn inner(&self, other: &Tensor) -> Result<Complex64> {
        if self.dims != other.dims {
            return shape(format!("dims {:?} vs {:?}", self.dims, other.dims));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        Ok(self.sub(other)?.data.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return domain("tensor order must be at least 1");
    }
    if dims.len() > MAX_ORDER {
        return domain(format!("tensor order {} exceeds {MAX_ORDER}", dims.len()));
    }
    if dims.contains(&0) {
        return domain(format!("every dimension must be positive, got {dims:?}"));
    }
    Ok(())
}

/// Steps a 0-based multi-index in canonical order (first index fastest).
pub(crate) fn advance(idx: &mut [usize], dims: &[usize]) {
    for (i, &d) in idx.iter_mut().zip(dims) {
        *i += 1;
        if *i < d {
            return;
        }
        *i = 0;
    }
}

/// Column index of a tensor element in a matricization, 1-based in and out.
///
/// Implements `j = 1 + sum_{k != n} (i_k - 1) * beta_k` with
/// `beta_k = prod_{m < k, m != n} d_m`. `multi_index` holds all N indices; the
/// entry at the excluded mode is ignored (it is the row index). With
/// `excluded_mode = None` this is the canonical full linearization.
/// `excluded_mode` is 1-based as well.
pub fn linear_index(
    multi_index: &[usize],
    dims: &[usize],
    excluded_mode: Option<usize>,
) -> Result<usize> {
    if multi_index.len() != dims.len() {
        return shape(format!(
            "index has {} entries for an order-{} tensor",
            multi_index.len(),
            dims.len()
        ));
    }
    if let Some(n) = excluded_mode {
        if n == 0 || n > dims.len() {
            return domain(format!("mode {n} outside 1..={}", dims.len()));
        }
    }
    let skip = excluded_mode.map(|n| n - 1);
    let mut j = 1;
    let mut beta = 1;
    for (k, (&i, &d)) in multi_index.iter().zip(dims).enumerate() {
        if Some(k) == skip {
            continue;
        }
        if i == 0 || i > d {
            return domain(format!("index {i} at position {} outside 1..={d}", k + 1));
        }
        j += (i - 1) * beta;
        beta *= d;
    }
    Ok(j)
}

fn check_mode(t: &Tensor, n: usize) -> Result<()> {
    if n >= t.order() {
        return domain(format!("mode {n} invalid for order-{} tensor (0-based)", t.order()));
    }
    Ok(())
}

/// Mode-n unfolding `X_(n)` (0-based `n`): a `d_n x (prod d / d_n)` matrix.
pub fn unfold(t: &Tensor, n: usize) -> Result<Matrix> {
    check_mode(t, n)?;
    let rows = t.dims[n];
    let cols = t.len() / rows;
    let mut m = Matrix::zeros(rows, cols);
    let mut idx = vec![0usize; t.order()];
    for &x in &t.data {
        let (r, c) = split_index(&idx, &t.dims, n);
        m[(r, c)] = x;
        advance(&mut idx, &t.dims);
    }
    Ok(m)
}

/// Inverse of [`unfold`]: rebuilds the tensor with shape `dims` from `X_(n)`.
pub fn fold(m: &Matrix, n: usize, dims: &[usize]) -> Result<Tensor> {
    check_dims(dims)?;
    if n >= dims.len() {
        return domain(format!("mode {n} invalid for {} dims (0-based)", dims.len()));
    }
    let total: usize = dims.iter().product();
    if m.nrows() != dims[n] || m.ncols() * m.nrows() != total {
        return shape(format!(
            "a {}x{} matrix cannot be folded along mode {n} into {dims:?}",
            m.nrows(),
            m.ncols()
        ));
    }
    let mut data = Vec::with_capacity(total);
    let mut idx = vec![0usize; dims.len()];
    for _ in 0..total {
        let (r, c) = split_index(&idx, dims, n);
        data.push(m[(r, c)]);
        advance(&mut idx, dims);
    }
    Ok(Tensor {
        dims: dims.to_vec(),
        data,
    })
}

fn split_index(idx: &[usize], dims: &[usize], n: usize) -> (usize, usize) {
    let mut col = 0;
    let mut beta = 1;
    for (k, (&i, &d)) in idx.iter().zip(dims).enumerate() {
        if k != n {
            col += i * beta;
            beta *= d;
        }
    }
    (idx[n], col)
}

/// Mode-n product `op x_n t`: replaces mode `n` by `op`'s row count.
pub fn mode_product(t: &Tensor, op: &Matrix, n: usize) -> Result<Tensor> {
    check_mode(t, n)?;
    if op.ncols() != t.dims[n] {
        return shape(format!(
            "operator with {} columns applied to mode {n} of size {}",
            op.ncols(),
            t.dims[n]
        ));
    }
    let prod = op * unfold(t, n)?;
    let mut dims = t.dims.clone();
    dims[n] = op.nrows();
    fold(&prod, n, &dims)
}

/// Multilinear action `(A_1 x ... x A_N) X`, one operator per mode.
pub fn apply_local(t: &Tensor, ops: &[Matrix]) -> Result<Tensor> {
    if ops.len() != t.order() {
        return shape(format!(
            "{} local operators for an order-{} tensor",
            ops.len(),
            t.order()
        ));
    }
    let mut out = t.clone();
    for (n, op) in ops.iter().enumerate() {
        out = mode_product(&out, op, n)?;
    }
    Ok(out)
}

/// Like [`apply_local`] but leaves modes with `None` untouched.
pub fn apply_partial(t: &Tensor, ops: &[Option<&Matrix>]) -> Result<Tensor> {
    if ops.len() != t.order() {
        return shape(format!(
            "{} local operators for an order-{} tensor",
            ops.len(),
            t.order()
        ));
    }
    let mut out = t.clone();
    for (n, op) in ops.iter().enumerate() {
        if let Some(op) = op {
            out = mode_product(&out, op, n)?;
        }
    }
    Ok(out)
}

/// Outer product `v_1 o v_2 o ... o v_N`.
pub fn outer(vectors: &[Vector]) -> Result<Tensor> {
    if vectors.is_empty() {
        return domain("outer product of an empty list");
    }
    let dims: Vec<usize> = vectors.iter().map(|v| v.len()).collect();
    Tensor::from_fn(dims, |idx| {
        idx.iter()
            .zip(vectors)
            .map(|(&i, v)| v[i])
            .product::<Complex64>()
    })
}

/// Square root of the sum of squared moduli.
pub fn frobenius_norm(t: &Tensor) -> f64 {
    t.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
