//! Thin wrappers over nalgebra factorizations with fixed sign conventions so
//! that decompositions are reproducible across runs and platforms.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Scalar;

/// Relative threshold below which a singular value is treated as zero.
pub(crate) const RANK_ZERO_REL: f64 = 1e-12;

/// Thin SVD `M = U diag(sigma) Vt` with singular values sorted descending and
/// each column of `U` flipped so its largest-magnitude entry is nonnegative.
pub struct ThinSvd<T: Scalar> {
    pub u: DMatrix<T>,
    pub sigma: DVector<T>,
    pub vt: DMatrix<T>,
}

pub fn thin_svd<T: Scalar>(m: &DMatrix<T>) -> ThinSvd<T> {
    let svd = m.clone().svd(true, true);
    let mut u = svd.u.expect("svd requested u");
    let mut vt = svd.v_t.expect("svd requested v_t");
    let sigma = svd.singular_values;
    for j in 0..u.ncols() {
        let mut pivot = 0;
        let mut best = T::zero();
        for i in 0..u.nrows() {
            let a = u[(i, j)].abs();
            if a > best {
                best = a;
                pivot = i;
            }
        }
        if u[(pivot, j)] < T::zero() {
            for i in 0..u.nrows() {
                u[(i, j)] = -u[(i, j)];
            }
            if j < vt.nrows() {
                for c in 0..vt.ncols() {
                    vt[(j, c)] = -vt[(j, c)];
                }
            }
        }
    }
    ThinSvd { u, sigma, vt }
}

/// Number of singular values exceeding `rel_tol * sigma_max`.
pub fn rank_from_singular_values<T: Scalar>(sigma: &DVector<T>, rel_tol: T) -> usize {
    let max = sigma.iter().fold(T::zero(), |m, &s| if s > m { s } else { m });
    if max <= T::zero() {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Thin QR `M = Q R` with `diag(R) >= 0`.
pub fn qr_pos<T: Scalar>(m: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    let k = q.ncols().min(r.ncols());
    for i in 0..k {
        if r[(i, i)] < T::zero() {
            for c in 0..r.ncols() {
                r[(i, c)] = -r[(i, c)];
            }
            for row in 0..q.nrows() {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    (q, r)
}

/// Eigenvalue range (min, max) of a symmetric matrix.
pub fn symmetric_eigen_range<T: Scalar>(m: &DMatrix<T>) -> (T, T) {
    let eig = m.clone().symmetric_eigenvalues();
    let mut min = T::max_value().unwrap_or_else(T::one);
    let mut max = -min;
    for &e in eig.iter() {
        if e < min {
            min = e;
        }
        if e > max {
            max = e;
        }
    }
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn svd_reconstructs_and_is_sign_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = DMatrix::<f64>::from_fn(5, 3, |_, _| rng.random_range(-1.0..1.0));
        let f = thin_svd(&m);
        let rec = &f.u * DMatrix::from_diagonal(&f.sigma) * &f.vt;
        assert_relative_eq!((rec - &m).norm(), 0.0, epsilon = 1e-12);
        for j in 0..f.u.ncols() {
            let col = f.u.column(j);
            let peak = col.iter().cloned().fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(col.iter().any(|&v| (v.abs() - peak).abs() < 1e-15 && v >= 0.0));
        }
        // Descending order.
        for w in f.sigma.as_slice().windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn qr_pos_diag_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = DMatrix::<f64>::from_fn(6, 4, |_, _| rng.random_range(-1.0..1.0));
        let (q, r) = qr_pos(&m);
        assert_relative_eq!((&q * &r - &m).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((q.transpose() * &q - DMatrix::identity(4, 4)).norm(), 0.0, epsilon = 1e-12);
        for i in 0..4 {
            assert!(r[(i, i)] >= 0.0);
        }
    }

    #[test]
    fn eigen_range_of_diagonal() {
        let m = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let (min, max) = symmetric_eigen_range(&m);
        assert_relative_eq!(min, -1.0, epsilon = 1e-12);
        assert_relative_eq!(max, 3.0, epsilon = 1e-12);
    }
}
