//! Dense multi-way arrays and the elementary tensor algebra used everywhere
//! else: unfoldings, mode contractions, Hadamard products, norms, and the
//! sampling mask.
//!
//! Layout convention: row-major, last index fastest. With that convention the
//! mode-`m` unfolding is a pure reinterpretation of the flat buffer as a
//! `(I_1⋯I_m) × (I_{m+1}⋯I_N)` matrix, so `unfold`/`fold` never permute data.
//! Indices are zero-based throughout.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("shape {shape:?} has a zero extent")]
    ZeroExtent { shape: Vec<usize> },
    #[error("data length {got} does not match shape {shape:?} (expects {want})")]
    LengthMismatch {
        shape: Vec<usize>,
        want: usize,
        got: usize,
    },
    #[error("non-finite value at linear index {at}")]
    NonFinite { at: usize },
    #[error("unfolding mode {mode} out of range 1..={max}")]
    ModeOutOfRange { mode: usize, max: usize },
    #[error("matrix is {rows}x{cols} but shape {shape:?} split at mode {mode} expects {want_rows}x{want_cols}")]
    FoldMismatch {
        rows: usize,
        cols: usize,
        shape: Vec<usize>,
        mode: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("contraction dimension mismatch: last extent {left} vs first extent {right}")]
    ContractionMismatch { left: usize, right: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("empty factor list")]
    EmptyFactors,
    #[error("lp norm requires p > 0, got {p}")]
    NonpositiveP { p: f64 },
    #[error("index {index:?} out of bounds for shape {shape:?}")]
    IndexOutOfBounds {
        index: Vec<usize>,
        shape: Vec<usize>,
    },
    #[error("observation index {index:?} has arity {got}, expected {want}")]
    ArityMismatch {
        index: Vec<usize>,
        want: usize,
        got: usize,
    },
    #[error("duplicate observation index {index:?}")]
    DuplicateIndex { index: Vec<usize> },
    #[error("cannot reshape length {len} into shape {shape:?}")]
    ReshapeMismatch { len: usize, shape: Vec<usize> },
}

/// Row-major linearization of `index` within `shape`.
pub fn linear_index(shape: &[usize], index: &[usize]) -> usize {
    debug_assert_eq!(shape.len(), index.len());
    let mut lin = 0;
    for (&i, &extent) in index.iter().zip(shape) {
        debug_assert!(i < extent);
        lin = lin * extent + i;
    }
    lin
}

/// Inverse of [`linear_index`].
pub fn multi_index(shape: &[usize], mut lin: usize) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for k in (0..shape.len()).rev() {
        idx[k] = lin % shape[k];
        lin /= shape[k];
    }
    idx
}

fn numel(shape: &[usize]) -> usize {
    shape.iter().product()
}

/// Dense order-N real tensor with explicit shape.
///
/// Invariants: the data length equals the product of the extents and every
/// stored value is finite. An empty shape is the order-0 (scalar) case.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor<T> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> DenseTensor<T> {
    /// Validating constructor; rejects zero extents, length mismatches, and
    /// non-finite entries.
    pub fn new(shape: Vec<usize>, data: Vec<T>) -> Result<Self, TensorError> {
        if shape.iter().any(|&e| e == 0) {
            return Err(TensorError::ZeroExtent { shape });
        }
        let want = numel(&shape);
        if data.len() != want {
            return Err(TensorError::LengthMismatch {
                shape,
                want,
                got: data.len(),
            });
        }
        if let Some(at) = data.iter().position(|v| !v.is_finite()) {
            return Err(TensorError::NonFinite { at });
        }
        Ok(Self { shape, data })
    }

    /// Constructor for internally produced buffers whose length is known to
    /// match; finiteness is only checked in debug builds.
    pub(crate) fn from_parts(shape: Vec<usize>, data: Vec<T>) -> Self {
        debug_assert_eq!(numel(&shape), data.len());
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self { shape, data }
    }

    pub fn zeros(shape: &[usize]) -> Self {
        Self::from_parts(shape.to_vec(), vec![T::zero(); numel(shape)])
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> T) -> Self {
        let n = numel(shape);
        let mut data = Vec::with_capacity(n);
        for lin in 0..n {
            data.push(f(&multi_index(shape, lin)));
        }
        Self::from_parts(shape.to_vec(), data)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn get(&self, index: &[usize]) -> T {
        self.data[linear_index(&self.shape, index)]
    }

    pub fn set(&mut self, index: &[usize], value: T) {
        let lin = linear_index(&self.shape, index);
        self.data[lin] = value;
    }

    /// Reinterprets the buffer under a new shape with the same element count.
    pub fn reshape(mut self, shape: Vec<usize>) -> Result<Self, TensorError> {
        if shape.iter().any(|&e| e == 0) {
            return Err(TensorError::ZeroExtent { shape });
        }
        if numel(&shape) != self.data.len() {
            return Err(TensorError::ReshapeMismatch {
                len: self.data.len(),
                shape,
            });
        }
        self.shape = shape;
        Ok(self)
    }

    /// Row-major matrix view splitting the shape after `split` leading modes
    /// (`split` may be 0 or N, yielding a single row or column).
    pub fn to_matrix(&self, split: usize) -> DMatrix<T> {
        let rows = numel(&self.shape[..split]);
        let cols = numel(&self.shape[split..]);
        DMatrix::from_row_slice(rows, cols, &self.data)
    }

    /// Inverse of [`DenseTensor::to_matrix`].
    pub fn from_matrix(m: &DMatrix<T>, shape: &[usize], split: usize) -> Result<Self, TensorError> {
        let want_rows = numel(&shape[..split]);
        let want_cols = numel(&shape[split..]);
        if m.nrows() != want_rows || m.ncols() != want_cols {
            return Err(TensorError::FoldMismatch {
                rows: m.nrows(),
                cols: m.ncols(),
                shape: shape.to_vec(),
                mode: split,
                want_rows,
                want_cols,
            });
        }
        let mut data = Vec::with_capacity(want_rows * want_cols);
        for r in 0..want_rows {
            for c in 0..want_cols {
                data.push(m[(r, c)]);
            }
        }
        Ok(Self::from_parts(shape.to_vec(), data))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self, TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch {
                expected: self.shape.clone(),
                found: other.shape.clone(),
            });
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

/// Mode-`m` unfolding: a `(I_1⋯I_m) × (I_{m+1}⋯I_N)` matrix whose (row, col)
/// indices are the row-major linearizations of the leading/trailing index
/// groups.
pub fn unfold<T: Scalar>(x: &DenseTensor<T>, mode: usize) -> Result<DMatrix<T>, TensorError> {
    let n = x.order();
    if mode == 0 || n == 0 || mode > n - 1 {
        return Err(TensorError::ModeOutOfRange {
            mode,
            max: n.saturating_sub(1),
        });
    }
    Ok(x.to_matrix(mode))
}

/// Inverse of [`unfold`] for the given shape and mode.
pub fn fold<T: Scalar>(
    m: &DMatrix<T>,
    shape: &[usize],
    mode: usize,
) -> Result<DenseTensor<T>, TensorError> {
    let n = shape.len();
    if mode == 0 || n == 0 || mode > n - 1 {
        return Err(TensorError::ModeOutOfRange {
            mode,
            max: n.saturating_sub(1),
        });
    }
    DenseTensor::from_matrix(m, shape, mode)
}

/// Mode-(N,1) contraction: sums the last index of `x` against the first index
/// of `y`. For two matrices this is the ordinary matrix product.
pub fn mode_contract<T: Scalar>(
    x: &DenseTensor<T>,
    y: &DenseTensor<T>,
) -> Result<DenseTensor<T>, TensorError> {
    let (nx, ny) = (x.order(), y.order());
    assert!(nx >= 1 && ny >= 1, "contraction operands must have order >= 1");
    let inner_left = x.shape()[nx - 1];
    let inner_right = y.shape()[0];
    if inner_left != inner_right {
        return Err(TensorError::ContractionMismatch {
            left: inner_left,
            right: inner_right,
        });
    }
    let xm = x.to_matrix(nx - 1);
    let ym = y.to_matrix(1);
    let z = xm * ym;
    let mut shape = x.shape()[..nx - 1].to_vec();
    shape.extend_from_slice(&y.shape()[1..]);
    DenseTensor::from_matrix(&z, &shape, nx - 1)
}

/// Entry-wise product of same-shaped factors.
pub fn hadamard<T: Scalar>(factors: &[&DenseTensor<T>]) -> Result<DenseTensor<T>, TensorError> {
    let first = *factors.first().ok_or(TensorError::EmptyFactors)?;
    let mut out = first.clone();
    for f in &factors[1..] {
        out = out.zip(f, |a, b| a * b)?;
    }
    Ok(out)
}

/// Norm selector for [`norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    Frobenius,
    Lp(f64),
}

pub fn norm<T: Scalar>(x: &DenseTensor<T>, kind: Norm) -> Result<T, TensorError> {
    match kind {
        Norm::Frobenius => Ok(frobenius(x)),
        Norm::Lp(p) => {
            if p <= 0.0 {
                return Err(TensorError::NonpositiveP { p });
            }
            let p = crate::scalar::cast::<T>(p);
            let sum: T = x.data().iter().map(|v| v.abs().powf(p)).sum();
            Ok(sum.powf(T::one() / p))
        }
    }
}

/// Frobenius norm, the default throughout the solver.
pub fn frobenius<T: Scalar>(x: &DenseTensor<T>) -> T {
    let sum: T = x.data().iter().map(|&v| v * v).sum();
    sum.sqrt()
}

/// Ambient inner product `<X, Y> = vec(X)' vec(Y)`.
pub fn inner<T: Scalar>(x: &DenseTensor<T>, y: &DenseTensor<T>) -> Result<T, TensorError> {
    if x.shape() != y.shape() {
        return Err(TensorError::ShapeMismatch {
            expected: x.shape().to_vec(),
            found: y.shape().to_vec(),
        });
    }
    Ok(x.data().iter().zip(y.data()).map(|(&a, &b)| a * b).sum())
}

/// Set of observed multi-indices driving the sampling map `P_Ω`.
///
/// Indices are stored flat (chunks of `order`); duplicates are rejected at
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationSet {
    order: usize,
    flat: Vec<usize>,
}

impl ObservationSet {
    pub fn new(
        order: usize,
        indices: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, TensorError> {
        let mut flat = Vec::new();
        for idx in indices {
            if idx.len() != order {
                return Err(TensorError::ArityMismatch {
                    want: order,
                    got: idx.len(),
                    index: idx,
                });
            }
            flat.extend_from_slice(&idx);
        }
        let set = Self { order, flat };
        set.check_duplicates()?;
        Ok(set)
    }

    pub fn empty(order: usize) -> Self {
        Self {
            order,
            flat: Vec::new(),
        }
    }

    /// Every index of the given shape.
    pub fn full(shape: &[usize]) -> Self {
        let mut flat = Vec::with_capacity(numel(shape) * shape.len());
        for lin in 0..numel(shape) {
            flat.extend_from_slice(&multi_index(shape, lin));
        }
        Self {
            order: shape.len(),
            flat,
        }
    }

    fn check_duplicates(&self) -> Result<(), TensorError> {
        let mut rows: Vec<&[usize]> = self.iter().collect();
        rows.sort_unstable();
        for w in rows.windows(2) {
            if w[0] == w[1] {
                return Err(TensorError::DuplicateIndex {
                    index: w[0].to_vec(),
                });
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        if self.order == 0 {
            0
        } else {
            self.flat.len() / self.order
        }
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.flat.chunks_exact(self.order.max(1))
    }

    pub fn check_bounds(&self, shape: &[usize]) -> Result<(), TensorError> {
        if self.order != shape.len() {
            return Err(TensorError::ArityMismatch {
                want: shape.len(),
                got: self.order,
                index: Vec::new(),
            });
        }
        for idx in self.iter() {
            if idx.iter().zip(shape).any(|(&i, &e)| i >= e) {
                return Err(TensorError::IndexOutOfBounds {
                    index: idx.to_vec(),
                    shape: shape.to_vec(),
                });
            }
        }
        Ok(())
    }

    /// Row-major linear positions of the observed entries within `shape`.
    pub fn linear_indices(&self, shape: &[usize]) -> Result<Vec<usize>, TensorError> {
        self.check_bounds(shape)?;
        Ok(self.iter().map(|idx| linear_index(shape, idx)).collect())
    }

    /// The unobserved indices of `shape`.
    pub fn complement(&self, shape: &[usize]) -> Result<ObservationSet, TensorError> {
        let lin = self.linear_indices(shape)?;
        let mut observed = vec![false; numel(shape)];
        for l in lin {
            observed[l] = true;
        }
        let mut flat = Vec::new();
        for (l, seen) in observed.iter().enumerate() {
            if !seen {
                flat.extend_from_slice(&multi_index(shape, l));
            }
        }
        Ok(ObservationSet {
            order: self.order,
            flat,
        })
    }
}

/// Sampling map `P_Ω`: copies observed entries, zeroes the rest.
pub fn apply_mask<T: Scalar>(
    x: &DenseTensor<T>,
    omega: &ObservationSet,
) -> Result<DenseTensor<T>, TensorError> {
    let lin = omega.linear_indices(x.shape())?;
    let mut out = DenseTensor::zeros(x.shape());
    for l in lin {
        out.data_mut()[l] = x.data()[l];
    }
    Ok(out)
}

/// Fast path for a precomputed linear index list (see
/// [`ObservationSet::linear_indices`]).
pub(crate) fn apply_mask_linear<T: Scalar>(x: &DenseTensor<T>, linear: &[usize]) -> DenseTensor<T> {
    let mut out = DenseTensor::zeros(x.shape());
    for &l in linear {
        out.data_mut()[l] = x.data()[l];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(shape: &[usize], rng: &mut ChaCha8Rng) -> DenseTensor<f64> {
        DenseTensor::from_fn(shape, |_| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn new_rejects_bad_inputs() {
        assert!(matches!(
            DenseTensor::<f64>::new(vec![2, 0], vec![]),
            Err(TensorError::ZeroExtent { .. })
        ));
        assert!(matches!(
            DenseTensor::new(vec![2, 2], vec![1.0; 3]),
            Err(TensorError::LengthMismatch { .. })
        ));
        assert!(matches!(
            DenseTensor::new(vec![2], vec![1.0, f64::NAN]),
            Err(TensorError::NonFinite { at: 1 })
        ));
    }

    #[test]
    fn unfold_of_matrix_is_identity() {
        let x = DenseTensor::new(vec![2, 3], (1..=6).map(f64::from).collect()).unwrap();
        let m = unfold(&x, 1).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], x.get(&[i, j]));
            }
        }
    }

    #[test]
    fn fold_unfold_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_tensor(&[2, 3, 4], &mut rng);
        for m in 1..=2 {
            let u = unfold(&x, m).unwrap();
            let back = fold(&u, x.shape(), m).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn unfold_linearization_rule() {
        // All eight index mappings of a 2x2x2 tensor with distinct entries.
        let x = DenseTensor::from_fn(&[2, 2, 2], |idx| {
            (idx[0] * 4 + idx[1] * 2 + idx[2]) as f64
        });
        let m1 = unfold(&x, 1).unwrap();
        let m2 = unfold(&x, 2).unwrap();
        for i0 in 0..2 {
            for i1 in 0..2 {
                for i2 in 0..2 {
                    let v = x.get(&[i0, i1, i2]);
                    assert_eq!(m1[(i0, i1 * 2 + i2)], v);
                    assert_eq!(m2[(i0 * 2 + i1, i2)], v);
                }
            }
        }
        // Spot check from the linearization rule: entry (1,0,1) at row 1, col 1.
        assert_eq!(m1[(1, 1)], x.get(&[1, 0, 1]));
    }

    #[test]
    fn unfold_mode_out_of_range() {
        let x = DenseTensor::<f64>::zeros(&[2, 3]);
        assert!(matches!(
            unfold(&x, 0),
            Err(TensorError::ModeOutOfRange { .. })
        ));
        assert!(matches!(
            unfold(&x, 2),
            Err(TensorError::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn fold_checks_dimensions() {
        let m = DMatrix::<f64>::zeros(6, 4);
        assert!(fold(&m, &[2, 3, 4], 2).is_ok());
        assert!(matches!(
            fold(&m, &[2, 3, 4], 1),
            Err(TensorError::FoldMismatch { .. })
        ));
        // Row vector onto shape (1, K).
        let row = DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0]);
        let t = fold(&row, &[1, 3], 1).unwrap();
        assert_eq!(t.data(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn mode_contract_matches_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_tensor(&[3, 4], &mut rng);
        let b = random_tensor(&[4, 5], &mut rng);
        let z = mode_contract(&a, &b).unwrap();
        let prod = a.to_matrix(1) * b.to_matrix(1);
        assert_eq!(z.shape(), &[3, 5]);
        for i in 0..3 {
            for j in 0..5 {
                assert_relative_eq!(z.get(&[i, j]), prod[(i, j)], max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn mode_contract_identity_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_tensor(&[2, 3, 4], &mut rng);
        let eye = DenseTensor::from_fn(&[4, 4], |idx| if idx[0] == idx[1] { 1.0 } else { 0.0 });
        let z = mode_contract(&x, &eye).unwrap();
        assert_eq!(z.shape(), x.shape());
        for (a, b) in z.data().iter().zip(x.data()) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn mode_contract_against_nested_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = random_tensor(&[2, 3, 2], &mut rng);
        let y = random_tensor(&[2, 2, 2], &mut rng);
        let z = mode_contract(&x, &y).unwrap();
        assert_eq!(z.shape(), &[2, 3, 2, 2]);
        for i0 in 0..2 {
            for i1 in 0..3 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        let mut want = 0.0;
                        for k in 0..2 {
                            want += x.get(&[i0, i1, k]) * y.get(&[k, j1, j2]);
                        }
                        assert_relative_eq!(
                            z.get(&[i0, i1, j1, j2]),
                            want,
                            max_relative = 1e-13
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mode_contract_dimension_mismatch() {
        let x = DenseTensor::<f64>::zeros(&[2, 3]);
        let y = DenseTensor::<f64>::zeros(&[2, 2]);
        assert!(matches!(
            mode_contract(&x, &y),
            Err(TensorError::ContractionMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn hadamard_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_tensor(&[2, 2], &mut rng);
        let single = hadamard(&[&x]).unwrap();
        assert_eq!(single, x);

        let ones = DenseTensor::from_fn(&[2, 2], |_| 1.0);
        assert_eq!(hadamard(&[&x, &ones]).unwrap(), x);

        assert!(matches!(
            hadamard::<f64>(&[]),
            Err(TensorError::EmptyFactors)
        ));
        let bad = DenseTensor::<f64>::zeros(&[2, 3]);
        assert!(matches!(
            hadamard(&[&x, &bad]),
            Err(TensorError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn hadamard_matches_elementwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_tensor(&[2, 2], &mut rng);
        let b = random_tensor(&[2, 2], &mut rng);
        let c = random_tensor(&[2, 2], &mut rng);
        let z = hadamard(&[&a, &b, &c]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = a.get(&[i, j]) * b.get(&[i, j]) * c.get(&[i, j]);
                assert_relative_eq!(z.get(&[i, j]), want, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn hadamard_commutes_and_associates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_tensor(&[3, 2], &mut rng);
            let b = random_tensor(&[3, 2], &mut rng);
            let c = random_tensor(&[3, 2], &mut rng);
            let abc = hadamard(&[&a, &b, &c]).unwrap();
            let cab = hadamard(&[&c, &a, &b]).unwrap();
            let bc = hadamard(&[&b, &c]).unwrap();
            let a_bc = hadamard(&[&a, &bc]).unwrap();
            for k in 0..abc.len() {
                assert!((abc.data()[k] - cab.data()[k]).abs() <= 1e-12);
                assert!((abc.data()[k] - a_bc.data()[k]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn norms() {
        let z = DenseTensor::<f64>::zeros(&[2, 3]);
        assert_eq!(norm(&z, Norm::Frobenius).unwrap(), 0.0);
        assert_eq!(norm(&z, Norm::Lp(1.5)).unwrap(), 0.0);

        let mut onehot = DenseTensor::<f64>::zeros(&[2, 2]);
        onehot.set(&[1, 0], 1.0);
        assert_relative_eq!(norm(&onehot, Norm::Frobenius).unwrap(), 1.0);
        assert_relative_eq!(norm(&onehot, Norm::Lp(1.0)).unwrap(), 1.0);
        assert_relative_eq!(norm(&onehot, Norm::Lp(0.5)).unwrap(), 1.0);

        assert!(matches!(
            norm(&onehot, Norm::Lp(0.0)),
            Err(TensorError::NonpositiveP { .. })
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_tensor(&[3, 3], &mut rng);
        let f = norm(&x, Norm::Frobenius).unwrap();
        let ip = inner(&x, &x).unwrap();
        assert_relative_eq!(f * f, ip, max_relative = 1e-12);
    }

    #[test]
    fn observation_set_validation() {
        assert!(matches!(
            ObservationSet::new(2, vec![vec![0, 0], vec![0, 0]]),
            Err(TensorError::DuplicateIndex { .. })
        ));
        assert!(matches!(
            ObservationSet::new(2, vec![vec![0]]),
            Err(TensorError::ArityMismatch { .. })
        ));
        let omega = ObservationSet::new(2, vec![vec![0, 0], vec![1, 2]]).unwrap();
        assert!(omega.check_bounds(&[2, 3]).is_ok());
        assert!(omega.check_bounds(&[2, 2]).is_err());
    }

    #[test]
    fn mask_full_and_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_tensor(&[2, 3], &mut rng);
        let full = ObservationSet::full(x.shape());
        assert_eq!(full.len(), 6);
        assert_eq!(apply_mask(&x, &full).unwrap(), x);

        let empty = ObservationSet::empty(2);
        let masked = apply_mask(&x, &empty).unwrap();
        assert!(masked.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mask_idempotent_linear_contractive() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = random_tensor(&[3, 4], &mut rng);
        let y = random_tensor(&[3, 4], &mut rng);
        let omega = ObservationSet::new(
            2,
            vec![vec![0, 0], vec![1, 3], vec![2, 2], vec![0, 1], vec![2, 0]],
        )
        .unwrap();
        let px = apply_mask(&x, &omega).unwrap();
        let ppx = apply_mask(&px, &omega).unwrap();
        assert_eq!(px, ppx);
        assert!(frobenius(&px) <= frobenius(&x));
        // Linearity.
        let sum = x.add(&y).unwrap();
        let psum = apply_mask(&sum, &omega).unwrap();
        let want = px.add(&apply_mask(&y, &omega).unwrap()).unwrap();
        for (a, b) in psum.data().iter().zip(want.data()) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn complement_partitions_the_grid() {
        let omega = ObservationSet::new(2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let comp = omega.complement(&[2, 2]).unwrap();
        assert_eq!(comp.len(), 2);
        let mut all: Vec<Vec<usize>> = omega
            .iter()
            .chain(comp.iter())
            .map(|s| s.to_vec())
            .collect();
        all.sort();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
