//! Tensor-train representation, TT-SVD and rounding, and the Riemannian
//! geometry of fixed-TT-rank manifolds: tangent projection, retraction, and
//! the manifold dimension formula.
//!
//! A TT-tensor is a chain of order-3 cores, core `k` shaped
//! `(r_{k-1}, I_k, r_k)` with `r_0 = r_N = 1`. Entry `(i_1..i_N)` is the
//! product of the core slices `A_1(1, i_1, :) A_2(:, i_2, :) ... A_N(:, i_N, 1)`.
//!
//! Tangent vectors at a manifold point are parametrized by per-core variation
//! arrays against the left-orthogonalized base, with the left-unfolding gauge
//! `L(delta_k)' L(U_k) = 0` for `k < N`. Together with left/right-orthonormal
//! interface chains this makes the per-core components mutually orthogonal, so
//! norms and inner products reduce to sums over the variation arrays.

use nalgebra::DMatrix;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{qr_pos, rank_from_singular_values, thin_svd, RANK_ZERO_REL};
use crate::scalar::{cast, Scalar};
use crate::tensor::{mode_contract, DenseTensor, TensorError};

#[derive(Debug, Error)]
pub enum TtError {
    #[error("core {k} has order {order}, expected 3")]
    CoreOrder { k: usize, order: usize },
    #[error("boundary ranks must be 1, got r_0 = {first}, r_N = {last}")]
    BoundaryRank { first: usize, last: usize },
    #[error("core {k} has leading rank {got}, previous core ends with {want}")]
    ChainMismatch { k: usize, want: usize, got: usize },
    #[error("rank vector {r:?} invalid for an order-{order} tensor")]
    InvalidRankVector { r: Vec<usize>, order: usize },
    #[error("manifold empty: need r_{{k-1}} <= I_k r_k and r_k <= I_k r_{{k-1}}, violated at k = {k}")]
    ManifoldEmpty { k: usize },
    #[error("base is rank-deficient at bond {bond}: realized {realized} < declared {declared}")]
    RankDeficient {
        bond: usize,
        realized: usize,
        declared: usize,
    },
    #[error("gauge violation {violation:e} exceeds tolerance at core {k}")]
    GaugeViolation { k: usize, violation: f64 },
    #[error("tangent has {got} variation arrays, base has {want} cores")]
    DeltaCount { want: usize, got: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Tensor in TT format: a consistent chain of order-3 cores.
#[derive(Debug, Clone, PartialEq)]
pub struct TTTensor<T> {
    cores: Vec<DenseTensor<T>>,
}

impl<T: Scalar> TTTensor<T> {
    pub fn new(cores: Vec<DenseTensor<T>>) -> Result<Self, TtError> {
        assert!(!cores.is_empty(), "a TT-tensor needs at least one core");
        for (k, c) in cores.iter().enumerate() {
            if c.order() != 3 {
                return Err(TtError::CoreOrder {
                    k,
                    order: c.order(),
                });
            }
        }
        let first = cores[0].shape()[0];
        let last = cores[cores.len() - 1].shape()[2];
        if first != 1 || last != 1 {
            return Err(TtError::BoundaryRank { first, last });
        }
        for k in 1..cores.len() {
            let want = cores[k - 1].shape()[2];
            let got = cores[k].shape()[0];
            if want != got {
                return Err(TtError::ChainMismatch { k, want, got });
            }
        }
        Ok(Self { cores })
    }

    /// Cores filled with independent standard-normal draws (sampled in `f64`
    /// and cast), for initialization and synthetic data.
    pub fn random_normal(
        shape: &[usize],
        ranks: &[usize],
        rng: &mut impl Rng,
    ) -> Result<Self, TtError> {
        validate_rank_vector(shape, ranks)?;
        let mut cores = Vec::with_capacity(shape.len());
        for (k, &extent) in shape.iter().enumerate() {
            let core_shape = [ranks[k], extent, ranks[k + 1]];
            cores.push(DenseTensor::from_fn(&core_shape, |_| {
                cast::<T>(rng.sample::<f64, _>(rand_distr::StandardNormal))
            }));
        }
        Self::new(cores)
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.cores.iter().map(|c| c.shape()[1]).collect()
    }

    /// Rank vector `(r_0, ..., r_N)` including the unit endpoints.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = Vec::with_capacity(self.cores.len() + 1);
        r.push(self.cores[0].shape()[0]);
        for c in &self.cores {
            r.push(c.shape()[2]);
        }
        r
    }

    pub fn cores(&self) -> &[DenseTensor<T>] {
        &self.cores
    }

    pub fn core(&self, k: usize) -> &DenseTensor<T> {
        &self.cores[k]
    }

    /// Left unfolding of core `k`: `(r_{k-1} I_k) x r_k`.
    pub fn left_unfold(&self, k: usize) -> DMatrix<T> {
        self.cores[k].to_matrix(2)
    }

    /// Right unfolding of core `k`: `r_{k-1} x (I_k r_k)`.
    pub fn right_unfold(&self, k: usize) -> DMatrix<T> {
        self.cores[k].to_matrix(1)
    }

    /// Scales the represented tensor by `c` (absorbed into the last core).
    pub fn scale(&self, c: T) -> Self {
        let mut cores = self.cores.clone();
        let last = cores.len() - 1;
        cores[last] = cores[last].scale(c);
        Self { cores }
    }

    /// Total number of stored core entries.
    pub fn parameter_count(&self) -> usize {
        self.cores.iter().map(|c| c.len()).sum()
    }
}

/// Materializes the TT-tensor by sequential mode contractions.
pub fn tt_full<T: Scalar>(a: &TTTensor<T>) -> DenseTensor<T> {
    let shape = a.shape();
    let n = a.order();
    // acc holds the partial chain as (I_1...I_k, r_k).
    let first = a.core(0);
    let mut acc = first
        .clone()
        .reshape(vec![shape[0], first.shape()[2]])
        .expect("core reshape");
    for k in 1..n {
        let z = mode_contract(&acc, a.core(k)).expect("chain contraction");
        let rows = acc.len() / acc.shape()[1] * shape[k];
        let r_next = a.core(k).shape()[2];
        acc = z.reshape(vec![rows, r_next]).expect("chain reshape");
    }
    acc.reshape(shape).expect("final reshape")
}

fn validate_rank_vector(shape: &[usize], r: &[usize]) -> Result<(), TtError> {
    let ok = r.len() == shape.len() + 1
        && r.first() == Some(&1)
        && r.last() == Some(&1)
        && r.iter().all(|&v| v >= 1);
    if !ok {
        return Err(TtError::InvalidRankVector {
            r: r.to_vec(),
            order: shape.len(),
        });
    }
    Ok(())
}

/// Checks the nonemptiness conditions `r_{k-1} <= I_k r_k`, `r_k <= I_k r_{k-1}`.
pub fn check_nonempty(shape: &[usize], r: &[usize]) -> Result<(), TtError> {
    validate_rank_vector(shape, r)?;
    for k in 1..=shape.len() {
        let i_k = shape[k - 1];
        if r[k - 1] > i_k * r[k] || r[k] > i_k * r[k - 1] {
            return Err(TtError::ManifoldEmpty { k });
        }
    }
    Ok(())
}

/// Dimension of the fixed-TT-rank manifold:
/// `sum_k r_{k-1} I_k r_k - sum_{k<N} r_k^2`.
pub fn manifold_dim(r: &[usize], shape: &[usize]) -> Result<usize, TtError> {
    check_nonempty(shape, r)?;
    let params: usize = (0..shape.len()).map(|k| r[k] * shape[k] * r[k + 1]).sum();
    let gauge: usize = (1..shape.len()).map(|k| r[k] * r[k]).sum();
    Ok(params - gauge)
}

/// TT-SVD: sequential truncated SVDs of the unfoldings.
///
/// Returns the decomposition and an upper bound on the reconstruction error
/// (the root of the summed squared discarded singular values). Truncation is
/// by the rank cap `rmax` and, when `tol > 0`, additionally by
/// `sigma_i <= tol * sigma_max` per unfolding; numerically zero singular
/// values are always dropped so the realized rank never exceeds the TT-rank
/// of the input.
pub fn tt_svd<T: Scalar>(
    x: &DenseTensor<T>,
    rmax: &[usize],
    tol: T,
) -> Result<(TTTensor<T>, T), TtError> {
    let shape = x.shape().to_vec();
    validate_rank_vector(&shape, rmax)?;
    let n = shape.len();
    let zero_rel = cast::<T>(RANK_ZERO_REL);

    let mut cores = Vec::with_capacity(n);
    let mut current = {
        let mut s = vec![1];
        s.extend_from_slice(&shape);
        x.clone().reshape(s)?
    };
    let mut tail_sq = T::zero();
    for k in 0..n - 1 {
        let m = current.to_matrix(2);
        let f = thin_svd(&m);
        let nonzero = rank_from_singular_values(&f.sigma, zero_rel);
        let mut keep = nonzero.min(rmax[k + 1]);
        if tol > T::zero() {
            keep = keep.min(rank_from_singular_values(&f.sigma, tol));
        }
        let keep = keep.max(1);
        for i in keep..f.sigma.len() {
            tail_sq += f.sigma[i] * f.sigma[i];
        }
        let r_prev = current.shape()[0];
        let u = f.u.columns(0, keep).into_owned();
        cores.push(DenseTensor::from_matrix(
            &u,
            &[r_prev, shape[k], keep],
            2,
        )?);
        let sv = DMatrix::from_diagonal(&f.sigma.rows(0, keep).into_owned())
            * f.vt.rows(0, keep).into_owned();
        let mut next_shape = vec![keep];
        next_shape.extend_from_slice(&shape[k + 1..]);
        current = DenseTensor::from_matrix(&sv, &next_shape, 1)?;
    }
    let r_prev = current.shape()[0];
    cores.push(current.reshape(vec![r_prev, shape[n - 1], 1])?);
    Ok((TTTensor::new(cores)?, tail_sq.sqrt()))
}

/// TT-rank of a dense tensor: numerical ranks of the sequential unfoldings at
/// relative tolerance `tol`, with unit endpoints.
pub fn tt_rank<T: Scalar>(x: &DenseTensor<T>, tol: T) -> Vec<usize> {
    let n = x.order();
    let mut r = Vec::with_capacity(n + 1);
    r.push(1);
    for m in 1..n {
        let f = thin_svd(&x.to_matrix(m));
        r.push(rank_from_singular_values(&f.sigma, tol));
    }
    r.push(1);
    r
}

/// Default relative tolerance for numerical TT-rank decisions.
pub fn default_rank_tol<T: Scalar>() -> T {
    cast::<T>(1e-10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// Canonicalization by QR sweeps; preserves the represented tensor.
///
/// Left form: cores `1..N-1` have orthonormal left-unfolding columns and the
/// last core carries the scale. Right form mirrors this from the other end.
pub fn orthogonalize<T: Scalar>(a: &TTTensor<T>, direction: Direction) -> TTTensor<T> {
    let mut cores = a.cores.clone();
    let n = cores.len();
    match direction {
        Direction::Left => {
            for k in 0..n - 1 {
                let (q, r) = qr_pos(&cores[k].to_matrix(2));
                let rho = q.ncols();
                let (r_prev, i_k) = (cores[k].shape()[0], cores[k].shape()[1]);
                cores[k] = DenseTensor::from_matrix(&q, &[r_prev, i_k, rho], 2)
                    .expect("left qr fold");
                let next = &r * cores[k + 1].to_matrix(1);
                let (i_next, r_next) = (cores[k + 1].shape()[1], cores[k + 1].shape()[2]);
                cores[k + 1] = DenseTensor::from_matrix(&next, &[rho, i_next, r_next], 1)
                    .expect("left carry fold");
            }
        }
        Direction::Right => {
            for k in (1..n).rev() {
                let m = cores[k].to_matrix(1);
                let (q, r) = qr_pos(&m.transpose());
                let rho = q.ncols();
                let (i_k, r_next) = (cores[k].shape()[1], cores[k].shape()[2]);
                cores[k] = DenseTensor::from_matrix(&q.transpose(), &[rho, i_k, r_next], 1)
                    .expect("right qr fold");
                let prev = cores[k - 1].to_matrix(2) * r.transpose();
                let (r_prev, i_prev) = (cores[k - 1].shape()[0], cores[k - 1].shape()[1]);
                cores[k - 1] = DenseTensor::from_matrix(&prev, &[r_prev, i_prev, rho], 2)
                    .expect("right carry fold");
            }
        }
    }
    TTTensor { cores }
}

/// Recompression of a TT-tensor to rank at most `target` without
/// materializing the dense tensor: right-orthogonalize, then truncate by
/// SVD left-to-right.
///
/// Returns the rounded tensor and the realized interior bond counts (the
/// numerically nonzero singular values kept per bond, capped by `target`).
pub fn tt_round<T: Scalar>(
    a: &TTTensor<T>,
    target: &[usize],
) -> Result<(TTTensor<T>, Vec<usize>), TtError> {
    let shape = a.shape();
    validate_rank_vector(&shape, target)?;
    let n = a.order();
    let mut realized = vec![1; n + 1];
    if n == 1 {
        return Ok((a.clone(), realized));
    }
    let mut cores = orthogonalize(a, Direction::Right).cores;
    let zero_rel = cast::<T>(RANK_ZERO_REL);
    for k in 0..n - 1 {
        let f = thin_svd(&cores[k].to_matrix(2));
        let nonzero = rank_from_singular_values(&f.sigma, zero_rel);
        let keep = nonzero.min(target[k + 1]).max(1);
        realized[k + 1] = nonzero.min(target[k + 1]);
        let (r_prev, i_k) = (cores[k].shape()[0], cores[k].shape()[1]);
        let u = f.u.columns(0, keep).into_owned();
        cores[k] = DenseTensor::from_matrix(&u, &[r_prev, i_k, keep], 2)?;
        let carry = DMatrix::from_diagonal(&f.sigma.rows(0, keep).into_owned())
            * f.vt.rows(0, keep).into_owned();
        let next = carry * cores[k + 1].to_matrix(1);
        let (i_next, r_next) = (cores[k + 1].shape()[1], cores[k + 1].shape()[2]);
        cores[k + 1] = DenseTensor::from_matrix(&next, &[keep, i_next, r_next], 1)?;
    }
    Ok((TTTensor::new(cores)?, realized))
}

/// Realized interior bond dimensions of `a` (numerical, relative tolerance
/// [`RANK_ZERO_REL`]); equals the TT-rank of the materialized tensor for
/// exact-arithmetic inputs.
pub fn realized_ranks<T: Scalar>(a: &TTTensor<T>) -> Result<Vec<usize>, TtError> {
    let (_, realized) = tt_round(a, &a.ranks())?;
    Ok(realized)
}

/// Tangent vector of the fixed-TT-rank manifold at `base`.
///
/// `base` is kept in left-orthogonal form alongside the matching
/// right-orthogonal form; `deltas[k]` is the order-3 variation array of core
/// `k`, gauge-orthogonal to the left unfolding of the base core for `k < N`.
#[derive(Debug, Clone)]
pub struct TTTangent<T> {
    left: TTTensor<T>,
    right: TTTensor<T>,
    deltas: Vec<DenseTensor<T>>,
}

impl<T: Scalar> TTTangent<T> {
    /// Validating constructor: checks chain consistency and the gauge
    /// condition (columnwise inner products below `1e-10` relative).
    pub fn new(
        left: TTTensor<T>,
        right: TTTensor<T>,
        deltas: Vec<DenseTensor<T>>,
    ) -> Result<Self, TtError> {
        if deltas.len() != left.order() {
            return Err(TtError::DeltaCount {
                want: left.order(),
                got: deltas.len(),
            });
        }
        for (k, d) in deltas.iter().enumerate() {
            if d.shape() != left.core(k).shape() {
                return Err(TensorError::ShapeMismatch {
                    expected: left.core(k).shape().to_vec(),
                    found: d.shape().to_vec(),
                }
                .into());
            }
        }
        let t = Self {
            left,
            right,
            deltas,
        };
        t.check_gauge()?;
        Ok(t)
    }

    fn from_parts(left: TTTensor<T>, right: TTTensor<T>, deltas: Vec<DenseTensor<T>>) -> Self {
        Self {
            left,
            right,
            deltas,
        }
    }

    /// Zero tangent at `base`.
    pub fn zero_at(base: &TTTensor<T>) -> Self {
        let left = orthogonalize(base, Direction::Left);
        let right = orthogonalize(base, Direction::Right);
        let deltas = left
            .cores()
            .iter()
            .map(|c| DenseTensor::zeros(c.shape()))
            .collect();
        Self::from_parts(left, right, deltas)
    }

    pub fn base_left(&self) -> &TTTensor<T> {
        &self.left
    }

    pub fn base_right(&self) -> &TTTensor<T> {
        &self.right
    }

    pub fn deltas(&self) -> &[DenseTensor<T>] {
        &self.deltas
    }

    fn check_gauge(&self) -> Result<(), TtError> {
        let n = self.left.order();
        let max_gram = |k: usize| -> T {
            let g = self.left.left_unfold(k).transpose() * self.deltas[k].to_matrix(2);
            g.iter().fold(T::zero(), |m, &v| {
                if v.abs() > m {
                    v.abs()
                } else {
                    m
                }
            })
        };
        for k in 0..n.saturating_sub(1) {
            let violation = max_gram(k);
            let scale = crate::tensor::frobenius(&self.deltas[k]).max(T::one());
            if violation > cast::<T>(1e-10) * scale {
                return Err(TtError::GaugeViolation {
                    k,
                    violation: violation.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Scales the tangent vector (deltas) by `c`; the gauge is preserved.
    pub fn scale(&self, c: T) -> Self {
        Self {
            left: self.left.clone(),
            right: self.right.clone(),
            deltas: self.deltas.iter().map(|d| d.scale(c)).collect(),
        }
    }

    /// Riemannian metric against another tangent at the same base.
    ///
    /// With the gauge and the orthonormal interface chains the per-core
    /// components are mutually orthogonal, so the ambient inner product is
    /// the sum of the delta inner products.
    pub fn inner(&self, other: &Self) -> T {
        self.deltas
            .iter()
            .zip(&other.deltas)
            .map(|(a, b)| crate::tensor::inner(a, b).expect("same-base tangents"))
            .sum()
    }

    pub fn norm_sq(&self) -> T {
        self.inner(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }
}

/// Orthogonal projection of an ambient tensor onto the tangent space at
/// `base`, which must realize its declared TT-rank exactly.
pub fn project_tangent<T: Scalar>(
    base: &TTTensor<T>,
    z: &DenseTensor<T>,
) -> Result<TTTangent<T>, TtError> {
    let shape = base.shape();
    if z.shape() != shape.as_slice() {
        return Err(TensorError::ShapeMismatch {
            expected: shape,
            found: z.shape().to_vec(),
        }
        .into());
    }
    let declared = base.ranks();
    let realized = realized_ranks(base)?;
    for bond in 1..declared.len() - 1 {
        if realized[bond] < declared[bond] {
            return Err(TtError::RankDeficient {
                bond,
                realized: realized[bond],
                declared: declared[bond],
            });
        }
    }

    let n = base.order();
    let left = orthogonalize(base, Direction::Left);
    let right = orthogonalize(base, Direction::Right);

    // Right interface chains: partial[k] spans modes k..N as (r_{k-1}, I_k..I_N).
    let mut right_partials: Vec<DenseTensor<T>> = vec![DenseTensor::zeros(&[1]); n];
    for k in (0..n).rev() {
        right_partials[k] = if k == n - 1 {
            let c = right.core(k);
            c.clone()
                .reshape(vec![c.shape()[0], c.shape()[1]])
                .expect("drop unit rank")
        } else {
            mode_contract(right.core(k), &right_partials[k + 1]).expect("right partial")
        };
    }

    // Left sweep: carry (r_{k-1}, I_k..I_N) = contraction of Z against the
    // first k-1 left-orthonormal cores.
    let mut carry = {
        let mut s = vec![1];
        s.extend_from_slice(z.shape());
        z.clone().reshape(s)?
    };
    let mut deltas = Vec::with_capacity(n);
    for k in 0..n {
        let unf = carry.to_matrix(2); // (r_{k-1} I_k) x (I_{k+1}..I_N)
        let coeff = if k == n - 1 {
            unf.clone()
        } else {
            let r_next = right_partials[k + 1].to_matrix(1); // r_k x (I_{k+1}..I_N)
            &unf * r_next.transpose()
        };
        let delta_mat = if k == n - 1 {
            coeff
        } else {
            let lu = left.left_unfold(k);
            &coeff - &lu * (lu.transpose() * &coeff)
        };
        let core_shape = left.core(k).shape().to_vec();
        deltas.push(DenseTensor::from_matrix(&delta_mat, &core_shape, 2)?);
        if k < n - 1 {
            let lu = left.left_unfold(k);
            let advanced = lu.transpose() * unf; // r_k x (I_{k+1}..I_N)
            let mut s = vec![left.core(k).shape()[2]];
            s.extend_from_slice(&z.shape()[k + 1..]);
            carry = DenseTensor::from_matrix(&advanced, &s, 1)?;
        }
    }
    Ok(TTTangent::from_parts(left, right, deltas))
}

/// TT representation of `base + step * xi` with interior ranks doubled: the
/// usual block construction with the left-orthogonal cores on the diagonal,
/// the right-orthogonal cores carrying the trailing chains, and the scaled
/// variations in the off-diagonal block.
fn tangent_step_tt<T: Scalar>(xi: &TTTangent<T>, step: T, include_base: bool) -> TTTensor<T> {
    let left = &xi.left;
    let right = &xi.right;
    let n = left.order();
    let shape = left.shape();
    if n == 1 {
        let mut core = xi.deltas[0].scale(step);
        if include_base {
            core = core.add(left.core(0)).expect("same shape");
        }
        return TTTensor::new(vec![core]).expect("single core");
    }
    let ranks = left.ranks();
    let mut cores = Vec::with_capacity(n);
    for k in 0..n {
        let (r_prev, i_k, r_next) = (ranks[k], shape[k], ranks[k + 1]);
        if k == 0 {
            // [step*delta_1, U_1]
            let mut c = DenseTensor::zeros(&[1, i_k, 2 * r_next]);
            for i in 0..i_k {
                for b in 0..r_next {
                    c.set(&[0, i, b], step * xi.deltas[k].get(&[0, i, b]));
                    c.set(&[0, i, r_next + b], left.core(k).get(&[0, i, b]));
                }
            }
            cores.push(c);
        } else if k == n - 1 {
            // [V_N; step*delta_N (+ U_N)]
            let mut c = DenseTensor::zeros(&[2 * r_prev, i_k, 1]);
            for a in 0..r_prev {
                for i in 0..i_k {
                    c.set(&[a, i, 0], right.core(k).get(&[a, i, 0]));
                    let mut v = step * xi.deltas[k].get(&[a, i, 0]);
                    if include_base {
                        v += left.core(k).get(&[a, i, 0]);
                    }
                    c.set(&[r_prev + a, i, 0], v);
                }
            }
            cores.push(c);
        } else {
            // [[V_k, 0], [step*delta_k, U_k]]
            let mut c = DenseTensor::zeros(&[2 * r_prev, i_k, 2 * r_next]);
            for a in 0..r_prev {
                for i in 0..i_k {
                    for b in 0..r_next {
                        c.set(&[a, i, b], right.core(k).get(&[a, i, b]));
                        c.set(&[r_prev + a, i, b], step * xi.deltas[k].get(&[a, i, b]));
                        c.set(&[r_prev + a, i, r_next + b], left.core(k).get(&[a, i, b]));
                    }
                }
            }
            cores.push(c);
        }
    }
    TTTensor::new(cores).expect("block chain is consistent")
}

/// Ambient-space tensor represented by a tangent vector; its TT-rank is at
/// most twice the base's interior ranks.
pub fn tangent_to_ambient<T: Scalar>(xi: &TTTangent<T>) -> DenseTensor<T> {
    tt_full(&tangent_step_tt(xi, T::one(), false))
}

/// Retraction result: the new manifold point plus whether the degenerate-rank
/// repair had to fire to restore the declared rank.
#[derive(Debug, Clone)]
pub struct Retraction<T> {
    pub point: TTTensor<T>,
    pub repaired: bool,
}

/// TT-SVD retraction: rounds `base + step * xi` back to the base's rank.
///
/// If the truncation degenerates (some bond realizes fewer nonzero singular
/// values than declared) the affected cores are padded with slices of
/// `1e-12`-scale deterministic perturbations so the iterate stays on the
/// manifold; the event is flagged for the caller.
pub fn retract<T: Scalar>(
    base: &TTTensor<T>,
    xi: &TTTangent<T>,
    step: T,
) -> Result<Retraction<T>, TtError> {
    let target = base.ranks();
    let sum = tangent_step_tt(xi, step, true);
    let (rounded, realized) = tt_round(&sum, &target)?;
    let deficient: Vec<usize> = (1..target.len() - 1)
        .filter(|&b| realized[b] < target[b])
        .collect();
    if deficient.is_empty() {
        return Ok(Retraction {
            point: rounded,
            repaired: false,
        });
    }

    // After the rounding sweep the last core carries the full scale.
    let n = rounded.order();
    let scale = crate::tensor::frobenius(rounded.core(n - 1)).max(T::one());
    let eps = cast::<T>(1e-12) * scale;
    let mut cores: Vec<DenseTensor<T>> = rounded.cores().to_vec();
    let mut counter = 0usize;
    for &bond in &deficient {
        let want = target[bond];
        let have = cores[bond - 1].shape()[2];
        if have >= want {
            continue;
        }
        cores[bond - 1] = pad_axis(&cores[bond - 1], 2, want, eps, &mut counter);
        cores[bond] = pad_axis(&cores[bond], 0, want, eps, &mut counter);
    }
    Ok(Retraction {
        point: TTTensor::new(cores)?,
        repaired: true,
    })
}

/// Grows `axis` of an order-3 core to `new_extent`, filling new entries with
/// a deterministic low-discrepancy pattern of amplitude `eps`.
fn pad_axis<T: Scalar>(
    core: &DenseTensor<T>,
    axis: usize,
    new_extent: usize,
    eps: T,
    counter: &mut usize,
) -> DenseTensor<T> {
    let old = core.shape().to_vec();
    let mut shape = old.clone();
    shape[axis] = new_extent;
    DenseTensor::from_fn(&shape, |idx| {
        if idx[axis] < old[axis] {
            core.get(idx)
        } else {
            *counter += 1;
            let golden = 0.618_033_988_749_894_9_f64;
            let frac = ((*counter as f64) * golden).fract() - 0.5;
            eps * cast::<T>(frac)
        }
    })
}
