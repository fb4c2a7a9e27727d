//! LU factorization with partial pivoting.

use crate::error::{Result, TnareError};
use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Packed `PA = LU` factors.
#[derive(Debug, Clone)]
pub struct Lu<T: Scalar> {
    lu: Mat<T>,
    perm: Vec<usize>,
    sign: f64,
}

impl<T: Scalar> Lu<T> {
    /// Factors `a`. A pivot with `|p| <= n * eps * ||a||_inf` is reported as
    /// [`TnareError::SingularMatrix`].
    pub fn factor(a: &Mat<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(TnareError::ShapeMismatch(format!("LU of {}x{}", a.rows(), a.cols())));
        }
        let n = a.rows();
        let thresh = n as f64 * f64::EPSILON * a.infinity_norm();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= thresh || !best.is_finite() {
                return Err(TnareError::SingularMatrix { step: k, pivot: best });
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / piv;
                lu[(i, k)] = l;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= l * u;
                }
            }
        }
        Ok(Lu { lu, perm, sign })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &Mat<T>) -> Result<Mat<T>> {
        let n = self.dim();
        if b.rows() != n {
            return Err(TnareError::ShapeMismatch(format!("rhs has {} rows, expected {n}", b.rows())));
        }
        let k = b.cols();
        let mut x = Mat::from_fn(n, k, |i, j| b[(self.perm[i], j)]);
        for i in 0..n {
            for p in 0..i {
                let l = self.lu[(i, p)];
                if l == T::zero() {
                    continue;
                }
                for j in 0..k {
                    let v = x[(p, j)];
                    x[(i, j)] -= l * v;
                }
            }
        }
        for i in (0..n).rev() {
            for p in i + 1..n {
                let u = self.lu[(i, p)];
                if u == T::zero() {
                    continue;
                }
                for j in 0..k {
                    let v = x[(p, j)];
                    x[(i, j)] -= u * v;
                }
            }
            let d = self.lu[(i, i)];
            for j in 0..k {
                x[(i, j)] = x[(i, j)] / d;
            }
        }
        x.ensure_finite("lu_solve")
    }

    /// Solves `X A = B`, i.e. `A^T X^T = B^T`.
    pub fn solve_right(&self, b: &Mat<T>) -> Result<Mat<T>> {
        let n = self.dim();
        if b.cols() != n {
            return Err(TnareError::ShapeMismatch(format!("rhs has {} cols, expected {n}", b.cols())));
        }
        // X A = B with P A = L U: X = B U^-1 L^-1 P.
        let mut y = b.clone();
        let m = b.rows();
        for j in 0..n {
            let d = self.lu[(j, j)];
            for r in 0..m {
                let mut s = y[(r, j)];
                for p in 0..j {
                    s -= y[(r, p)] * self.lu[(p, j)];
                }
                y[(r, j)] = s / d;
            }
        }
        for j in (0..n).rev() {
            for r in 0..m {
                let mut s = y[(r, j)];
                for p in j + 1..n {
                    s -= y[(r, p)] * self.lu[(p, j)];
                }
                y[(r, j)] = s;
            }
        }
        let mut x = Mat::zeros(m, n);
        for r in 0..m {
            for j in 0..n {
                x[(r, self.perm[j])] = y[(r, j)];
            }
        }
        x.ensure_finite("lu_solve_right")
    }

    pub fn inverse(&self) -> Result<Mat<T>> {
        self.solve(&Mat::identity(self.dim()))
    }

    pub fn det(&self) -> T {
        let mut d = T::from_f64(self.sign);
        for i in 0..self.dim() {
            d *= self.lu[(i, i)];
        }
        d
    }
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn lu_solve<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<Mat<T>> {
    Lu::factor(a)?.solve(b)
}

pub fn inverse<T: Scalar>(a: &Mat<T>) -> Result<Mat<T>> {
    Lu::factor(a)?.inverse()
}
