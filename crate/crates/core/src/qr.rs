//! Householder QR.

use crate::error::{Result, TnareError};
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Householder reflector `I - tau v v^*` mapping `x` to a multiple of `e_1`.
/// Returns `None` when `x` is already a multiple of `e_1`.
pub(crate) fn householder<T: Scalar>(x: &[T]) -> Option<(Vec<T>, f64)> {
    let tail: f64 = x[1..].iter().map(|v| v.abs2()).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = (x[0].abs2() + tail).sqrt();
    let x0 = x[0];
    let phase = if x0.abs() == 0.0 { T::one() } else { x0.scale(1.0 / x0.abs()) };
    // v = x + phase * ||x|| e1 avoids cancellation in the first entry.
    let mut v = x.to_vec();
    v[0] = x0 + phase.scale(norm);
    let vnorm2: f64 = v.iter().map(|c| c.abs2()).sum();
    Some((v, 2.0 / vnorm2))
}

/// Applies `(I - tau v v^*)` from the left to rows `r0..r0+len(v)` of `a`.
pub(crate) fn apply_left<T: Scalar>(a: &mut Mat<T>, r0: usize, v: &[T], tau: f64, c0: usize) {
    for j in c0..a.cols() {
        let mut s = T::zero();
        for (k, &vk) in v.iter().enumerate() {
            s += vk.conj() * a[(r0 + k, j)];
        }
        if s == T::zero() {
            continue;
        }
        let s = s.scale(tau);
        for (k, &vk) in v.iter().enumerate() {
            a[(r0 + k, j)] -= vk * s;
        }
    }
}

/// Applies `(I - tau v v^*)` from the right to columns `c0..c0+len(v)` of `a`.
pub(crate) fn apply_right<T: Scalar>(a: &mut Mat<T>, c0: usize, v: &[T], tau: f64) {
    for i in 0..a.rows() {
        let mut s = T::zero();
        for (k, &vk) in v.iter().enumerate() {
            s += a[(i, c0 + k)] * vk;
        }
        if s == T::zero() {
            continue;
        }
        let s = s.scale(tau);
        for (k, &vk) in v.iter().enumerate() {
            a[(i, c0 + k)] -= s * vk.conj();
        }
    }
}

/// Full QR factorization `A = Q R` of an `m x k` matrix, `m >= k`.
pub fn qr_householder<T: Scalar>(a: &Mat<T>) -> Result<(Mat<T>, Mat<T>)> {
    let (m, k) = a.shape();
    if m < k {
        return Err(TnareError::ShapeMismatch(format!("QR needs rows >= cols, got {m}x{k}")));
    }
    let mut r = a.clone();
    let mut q = Mat::identity(m);
    for j in 0..k.min(m.saturating_sub(1)) {
        let x: Vec<T> = (j..m).map(|i| r[(i, j)]).collect();
        if let Some((v, tau)) = householder(&x) {
            apply_left(&mut r, j, &v, tau, j);
            apply_right(&mut q, j, &v, tau);
            for i in j + 1..m {
                r[(i, j)] = T::zero();
            }
        }
    }
    Ok((q, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{CMatrix, DenseMatrix};
    use crate::scalar::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check<T: Scalar>(a: &Mat<T>, tol: f64) {
        let (q, r) = qr_householder(a).unwrap();
        let m = a.rows();
        assert!((&(&q * &r) - a).frobenius_norm() <= tol * a.frobenius_norm().max(1.0));
        assert!((&(q.adjoint() * &q) - &Mat::identity(m)).frobenius_norm() <= tol);
        for i in 0..r.rows() {
            for j in 0..i.min(r.cols()) {
                assert_eq!(r[(i, j)], T::zero());
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        let (q, r) = qr_householder(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(q, DenseMatrix::identity(3));
        assert_eq!(r, DenseMatrix::identity(3));
    }

    #[test]
    fn unit_column() {
        let a = DenseMatrix::from_rows(&[&[0.0], &[1.0]]);
        let (q, r) = qr_householder(&a).unwrap();
        assert!((r[(0, 0)].abs() - 1.0).abs() < 1e-15);
        assert!((&(&q * &r) - &a).max_abs() < 1e-15);
    }

    #[test]
    fn seeded_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = DenseMatrix::from_fn(5, 3, |_, _| rng.random_range(-1.0..1.0));
        check(&a, 1e-13);
        let c = CMatrix::from_fn(6, 4, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        check(&c, 1e-13);
    }

    #[test]
    fn rejects_wide() {
        assert!(qr_householder(&DenseMatrix::zeros(2, 3)).is_err());
    }
}
