//! Dense row-major matrices.
//!
//! Entry `(i, j)` lives at `data[i * cols + j]`. The vectorization
//! [`Mat::vec`] stacks columns (column-major), so that
//! `vec(B X A^T) = kron(A, B) vec(X)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Result, TnareError};
use crate::scalar::{Scalar, C64};

#[derive(Clone, PartialEq)]
pub struct Mat<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Real double-precision matrix.
pub type DenseMatrix = Mat<f64>;
/// Complex double-precision matrix.
pub type CMatrix = Mat<C64>;

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                write!(f, " {:?}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(TnareError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(TnareError::NonFinite("matrix construction"));
        }
        Ok(Mat { rows, cols, data })
    }

    /// Panics on ragged input; intended for literals in code and tests.
    pub fn from_rows(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Returns `Err(NonFinite(ctx))` if any entry overflowed or became NaN.
    pub fn ensure_finite(self, ctx: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(TnareError::NonFinite(ctx))
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn to_complex(&self) -> CMatrix {
        self.map(|x| x.to_c64())
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = Self::zeros(m, n);
        for i in 0..m {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == T::zero() {
                    continue;
                }
                let brow = &rhs.data[p * n..(p + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self^T * rhs` without forming the transpose.
    pub fn tr_matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "tr_matmul: row counts differ");
        let (k, m, n) = (self.rows, self.cols, rhs.cols);
        let mut out = Self::zeros(m, n);
        for p in 0..k {
            let brow = &rhs.data[p * n..(p + 1) * n];
            for i in 0..m {
                let a = self.data[p * m + i];
                if a == T::zero() {
                    continue;
                }
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "submatrix out of range");
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "set_block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }

    pub fn vstack(top: &Self, bottom: &Self) -> Self {
        assert_eq!(top.cols, bottom.cols);
        let mut data = top.data.clone();
        data.extend_from_slice(&bottom.data);
        Mat { rows: top.rows + bottom.rows, cols: top.cols, data }
    }

    pub fn hstack(left: &Self, right: &Self) -> Self {
        assert_eq!(left.rows, right.rows);
        let mut m = Self::zeros(left.rows, left.cols + right.cols);
        m.set_block(0, 0, left);
        m.set_block(0, left.cols, right);
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        // Scaled accumulation so that huge entries do not overflow.
        let amax = self.max_abs();
        if amax == 0.0 || !amax.is_finite() {
            return amax;
        }
        let s: f64 = self.data.iter().map(|x| (x.abs() / amax).powi(2)).sum();
        amax * s.sqrt()
    }

    /// Maximum absolute row sum.
    pub fn infinity_norm(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Column-major vectorization as an `(rows*cols) x 1` matrix.
    pub fn vec(&self) -> Self {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Mat { rows: self.rows * self.cols, cols: 1, data }
    }

    /// Inverse of [`Mat::vec`].
    pub fn unvec(v: &[T], rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols, "unvec: length mismatch");
        Self::from_fn(rows, cols, |i, j| v[j * rows + i])
    }

    pub fn kron(&self, b: &Self) -> Self {
        let (p, q) = b.shape();
        let mut out = Self::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == T::zero() {
                    continue;
                }
                for r in 0..p {
                    for s in 0..q {
                        out[(i * p + r, j * q + s)] = a * b[(r, s)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut t = T::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    pub fn axpy(&mut self, a: T, x: &Self) {
        assert_eq!(self.shape(), x.shape());
        for (y, &xv) in self.data.iter_mut().zip(&x.data) {
            *y += a * xv;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl DenseMatrix {
    /// Entrywise `self >= -tol`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.data.iter().all(|&x| x >= -tol)
    }
}

impl CMatrix {
    pub fn real_part(&self) -> DenseMatrix {
        self.map(|x| x.re)
    }
    pub fn imag_part(&self) -> DenseMatrix {
        self.map(|x| x.im)
    }
}

/// Permutation `Π` with `Π vec(X) = vec(X^T)` for `n x n` matrices `X`.
pub fn commutation_matrix(n: usize) -> DenseMatrix {
    let mut p = DenseMatrix::zeros(n * n, n * n);
    // vec(X)[j*n + i] = X[i, j]; vec(X^T)[i*n + j] = X[i, j].
    for i in 0..n {
        for j in 0..n {
            p[(i * n + j, j * n + i)] = 1.0;
        }
    }
    p
}

pub fn kron<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    a.kron(b)
}

pub fn frobenius_norm<T: Scalar>(a: &Mat<T>) -> f64 {
    a.frobenius_norm()
}

pub fn infinity_norm<T: Scalar>(a: &Mat<T>) -> f64 {
    a.infinity_norm()
}

impl<T: Scalar> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

macro_rules! elementwise {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<T: Scalar> $trait<&Mat<T>> for &Mat<T> {
            type Output = Mat<T>;
            fn $method(self, rhs: &Mat<T>) -> Mat<T> {
                assert_eq!(self.shape(), rhs.shape(), concat!(stringify!($method), ": shape mismatch"));
                Mat {
                    rows: self.rows,
                    cols: self.cols,
                    data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a $op b).collect(),
                }
            }
        }
        impl<T: Scalar> $trait<Mat<T>> for Mat<T> {
            type Output = Mat<T>;
            fn $method(self, rhs: Mat<T>) -> Mat<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $trait<&Mat<T>> for Mat<T> {
            type Output = Mat<T>;
            fn $method(self, rhs: &Mat<T>) -> Mat<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Scalar> $trait<Mat<T>> for &Mat<T> {
            type Output = Mat<T>;
            fn $method(self, rhs: Mat<T>) -> Mat<T> {
                self.$method(&rhs)
            }
        }
    };
}

elementwise!(Add, add, +);
elementwise!(Sub, sub, -);

impl<T: Scalar> Mul<&Mat<T>> for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}
impl<T: Scalar> Mul<Mat<T>> for Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: Mat<T>) -> Mat<T> {
        self.matmul(&rhs)
    }
}
impl<T: Scalar> Mul<&Mat<T>> for Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}
impl<T: Scalar> Mul<Mat<T>> for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: Mat<T>) -> Mat<T> {
        self.matmul(&rhs)
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x)
    }
}
impl<T: Scalar> Neg for Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norms_on_small_cases() {
        let i2 = DenseMatrix::identity(2);
        assert!((i2.frobenius_norm() - 2f64.sqrt()).abs() < 1e-15);
        let a = DenseMatrix::from_rows(&[&[1.0, -3.0], &[2.0, 0.0]]);
        assert_eq!(a.infinity_norm(), 4.0);
    }

    #[test]
    fn vec_is_column_major() {
        let a = DenseMatrix::from_rows(&[&[1.0, 3.0], &[2.0, 4.0]]);
        assert_eq!(a.vec().as_slice(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(DenseMatrix::unvec(a.vec().as_slice(), 2, 2), a);
    }

    #[test]
    fn kron_small() {
        let b = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(DenseMatrix::identity(1).kron(&b), b);
        let a = DenseMatrix::diag(&[1.0, 2.0]);
        let c = DenseMatrix::from_rows(&[&[3.0]]);
        assert_eq!(a.kron(&c), DenseMatrix::diag(&[3.0, 6.0]));
    }

    #[test]
    fn commutation_small() {
        assert_eq!(commutation_matrix(1), DenseMatrix::identity(1));
        let p = commutation_matrix(2);
        let expect = DenseMatrix::from_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(p, expect);
        let p3 = commutation_matrix(3);
        assert_eq!(&p3 * &p3, DenseMatrix::identity(9));
    }

    #[test]
    fn from_vec_rejects_nan() {
        assert!(DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(DenseMatrix::from_vec(1, 2, vec![1.0]).is_err());
    }

    #[test]
    fn tr_matmul_matches_transpose() {
        let a = DenseMatrix::from_fn(3, 2, |i, j| (i * 2 + j) as f64 - 1.5);
        let b = DenseMatrix::from_fn(3, 4, |i, j| (i + j * j) as f64);
        assert_eq!(a.tr_matmul(&b), a.transpose().matmul(&b));
    }

    fn mat(n: usize, m: usize) -> impl Strategy<Value = DenseMatrix> {
        proptest::collection::vec(-10.0f64..10.0, n * m)
            .prop_map(move |v| DenseMatrix::from_vec(n, m, v).unwrap())
    }

    proptest! {
        #[test]
        fn commutation_transposes(n in 1usize..7, seed in proptest::collection::vec(-5.0f64..5.0, 36)) {
            let x = DenseMatrix::from_fn(n, n, |i, j| seed[i * 6 + j]);
            let p = commutation_matrix(n);
            prop_assert_eq!(&p * &x.vec(), x.transpose().vec());
        }

        #[test]
        fn kron_vec_identity(a in mat(2, 2), b in mat(2, 2), x in mat(2, 2)) {
            // vec(B X A^T) = kron(A, B) vec(X)
            let lhs = (&b * &x * a.transpose()).vec();
            let rhs = a.kron(&b) * x.vec();
            prop_assert!((&lhs - &rhs).frobenius_norm() <= 1e-12 * (1.0 + lhs.frobenius_norm()));
        }
    }
}
