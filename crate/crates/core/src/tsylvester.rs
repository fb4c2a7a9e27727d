//! The T-Sylvester equation `P H + H^T Q = F`.
//!
//! [`TSylvester`] triangularizes the pencil `P + z Q^T` once with QZ and then
//! solves in `O(n^3)` per right-hand side. [`tsylvester_kron`] forms the
//! `n^2 x n^2` system `(I (x) P + (Q^T (x) I) Pi) vec(H) = vec(F)` directly.

use crate::error::{Result, TnareError};
use crate::lu::lu_solve;
use crate::matrix::{commutation_matrix, CMatrix, Mat};
use crate::qz::qz_decompose;
use crate::scalar::Scalar;

/// Reusable factorization of `H -> P H + H^T Q`.
#[derive(Debug, Clone)]
pub struct TSylvester {
    u: CMatrix,
    v: CMatrix,
    tp: CMatrix,
    tq: CMatrix,
    thresh: f64,
}

impl TSylvester {
    pub fn new<T: Scalar>(p: &Mat<T>, q: &Mat<T>) -> Result<Self> {
        if !p.is_square() || p.shape() != q.shape() {
            return Err(TnareError::ShapeMismatch("T-Sylvester coefficients".into()));
        }
        let n = p.rows();
        // P = U T_P V^*, Q^T = U T_Q V^*.
        let gs = qz_decompose(p, &q.transpose())?;
        let scale = gs.s.max_abs().max(gs.t.max_abs());
        let thresh = 4.0 * n.max(1) as f64 * f64::EPSILON * scale * scale;
        Ok(TSylvester { u: gs.q, v: gs.z, tp: gs.s, tq: gs.t, thresh })
    }

    pub fn dim(&self) -> usize {
        self.tp.rows()
    }

    /// Eigenvalues `-p_ii / q_ii` of `P + z Q^T`; the operator is singular
    /// exactly when some `mu_i = 1` or `mu_i mu_j = 1`.
    pub fn pencil_eigs(&self) -> Vec<crate::qz::Eig> {
        (0..self.dim()).map(|i| crate::qz::Eig::new(self.tp[(i, i)], self.tq[(i, i)])).collect()
    }

    pub fn solve<T: Scalar>(&self, f: &Mat<T>) -> Result<Mat<T>> {
        let n = self.dim();
        if f.shape() != (n, n) {
            return Err(TnareError::ShapeMismatch("T-Sylvester right-hand side".into()));
        }
        // T_P K + K^T T_Q^T = U^* F conj(U), then H = V K U^T.
        let fp = self.u.adjoint() * f.to_complex() * self.u.conj();
        let (tp, tq) = (&self.tp, &self.tq);
        let mut k = CMatrix::zeros(n, n);
        for i in (0..n).rev() {
            for j in (i..n).rev() {
                // Equation (i, j) reads
                //   sum_{l>=i} P_il K_lj + sum_{l>=j} Q_jl K_li = F'_ij.
                let mut r_ij = fp[(i, j)];
                for l in i + 1..n {
                    r_ij -= tp[(i, l)] * k[(l, j)];
                }
                for l in j + 1..n {
                    r_ij -= tq[(j, l)] * k[(l, i)];
                }
                if i == j {
                    let d = tp[(i, i)] + tq[(i, i)];
                    if d.norm() * d.norm() <= self.thresh {
                        return Err(TnareError::SingularMatrix { step: i, pivot: d.norm() });
                    }
                    k[(i, i)] = r_ij / d;
                    continue;
                }
                let mut r_ji = fp[(j, i)];
                for l in j + 1..n {
                    r_ji -= tp[(j, l)] * k[(l, i)];
                }
                for l in i + 1..n {
                    r_ji -= tq[(i, l)] * k[(l, j)];
                }
                // [[P_ii, Q_jj], [Q_ii, P_jj]] [K_ij; K_ji] = [r_ij; r_ji]
                let (a11, a12, a21, a22) = (tp[(i, i)], tq[(j, j)], tq[(i, i)], tp[(j, j)]);
                let det = a11 * a22 - a12 * a21;
                if det.norm() <= self.thresh {
                    return Err(TnareError::SingularMatrix { step: i * n + j, pivot: det.norm() });
                }
                k[(i, j)] = (a22 * r_ij - a12 * r_ji) / det;
                k[(j, i)] = (a11 * r_ji - a21 * r_ij) / det;
            }
        }
        let h = &self.v * &k * self.u.transpose();
        let h = h.ensure_finite("T-Sylvester solve")?;
        Ok(h.map(T::from_c64_lossy))
    }
}

/// Solves `P H + H^T Q = F` through the Schur route.
pub fn tsylvester_solve<T: Scalar>(p: &Mat<T>, q: &Mat<T>, f: &Mat<T>) -> Result<Mat<T>> {
    TSylvester::new(p, q)?.solve(f)
}

/// Kronecker matrix `I (x) P + (Q^T (x) I) Pi` acting on `vec(H)`.
pub fn tsylvester_operator<T: Scalar>(p: &Mat<T>, q: &Mat<T>) -> Mat<T> {
    let n = p.rows();
    let id = Mat::<T>::identity(n);
    let pi = commutation_matrix(n).map(T::from_f64);
    id.kron(p) + q.transpose().kron(&id) * pi
}

/// Solves `P H + H^T Q = F` by dense LU on the `n^2 x n^2` Kronecker system.
pub fn tsylvester_kron<T: Scalar>(p: &Mat<T>, q: &Mat<T>, f: &Mat<T>) -> Result<Mat<T>> {
    let n = p.rows();
    let w = tsylvester_operator(p, q);
    let x = lu_solve(&w, &f.vec())?;
    Ok(Mat::unvec(x.as_slice(), n, n))
}

/// `||P H + H^T Q - F||_F`.
pub fn tsylvester_residual<T: Scalar>(p: &Mat<T>, q: &Mat<T>, h: &Mat<T>, f: &Mat<T>) -> f64 {
    (p * h + h.transpose() * q - f).frobenius_norm()
}
