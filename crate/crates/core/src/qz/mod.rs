//! Generalized Schur decomposition of pencils written `A' + z B'`.
//!
//! The whole crate reads the eigenvalue of a diagonal pair `(s, t)` as
//! `lambda = -s / t`; see [`Eig::lambda`].

mod hessenberg;
mod iteration;
mod reorder;
pub(crate) mod rot;

pub use hessenberg::hessenberg_triangular;

use crate::error::{Result, TnareError};
use crate::matrix::{CMatrix, Mat};
use crate::scalar::{Scalar, C64};

/// Homogeneous eigenvalue of `A' + z B'`: `alpha + lambda * beta = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eig {
    pub alpha: C64,
    pub beta: C64,
}

impl Eig {
    pub fn new(alpha: C64, beta: C64) -> Self {
        Eig { alpha, beta }
    }

    /// `-alpha / beta`, or `None` for an infinite eigenvalue.
    pub fn lambda(&self) -> Option<C64> {
        if self.beta.norm() == 0.0 {
            None
        } else {
            Some(-self.alpha / self.beta)
        }
    }

    /// `|lambda|`, infinite when `beta = 0`.
    pub fn modulus(&self) -> f64 {
        if self.beta.norm() == 0.0 {
            f64::INFINITY
        } else {
            self.alpha.norm() / self.beta.norm()
        }
    }

    pub fn is_inside(&self) -> bool {
        self.alpha.norm() < self.beta.norm()
    }

    pub fn is_outside(&self) -> bool {
        self.alpha.norm() > self.beta.norm()
    }

    /// True when `| |lambda| - 1 | < delta`.
    pub fn near_unit_circle(&self, delta: f64) -> bool {
        (self.alpha.norm() - self.beta.norm()).abs() < delta * self.beta.norm()
    }

    /// True when `lambda * other = 1` up to `tol` (homogeneous test).
    pub fn is_reciprocal_of(&self, other: &Eig, tol: f64) -> bool {
        let lhs = self.alpha * other.alpha - self.beta * other.beta;
        let scale = (self.alpha.norm() + self.beta.norm()) * (other.alpha.norm() + other.beta.norm());
        lhs.norm() <= tol * scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QzWarning {
    /// A block exchange left a residual above `1e3 eps ||pencil||`; the swap
    /// was still applied.
    SwapIllConditioned { position: usize, residual: f64 },
}

/// `A' = Q S Z^*`, `B' = Q T Z^*` with `S`, `T` upper triangular.
#[derive(Debug, Clone)]
pub struct GeneralizedSchur {
    pub q: CMatrix,
    pub z: CMatrix,
    pub s: CMatrix,
    pub t: CMatrix,
    pub eigs: Vec<Eig>,
    pub warnings: Vec<QzWarning>,
}

impl GeneralizedSchur {
    pub fn dim(&self) -> usize {
        self.s.rows()
    }

    pub(crate) fn refresh_eigs(&mut self) {
        self.eigs = (0..self.dim()).map(|i| Eig::new(self.s[(i, i)], self.t[(i, i)])).collect();
    }

    /// Finite eigenvalues as `lambda = -s_ii / t_ii`; infinite ones as `inf`.
    pub fn lambdas(&self) -> Vec<C64> {
        self.eigs.iter().map(|e| e.lambda().unwrap_or(C64::new(f64::INFINITY, 0.0))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenSelector {
    InsideUnitDisk,
    OutsideUnitDisk,
    Indices(Vec<usize>),
}

impl EigenSelector {
    pub fn flags(&self, eigs: &[Eig]) -> Vec<bool> {
        match self {
            EigenSelector::InsideUnitDisk => eigs.iter().map(Eig::is_inside).collect(),
            EigenSelector::OutsideUnitDisk => eigs.iter().map(Eig::is_outside).collect(),
            EigenSelector::Indices(idx) => {
                let mut f = vec![false; eigs.len()];
                for &i in idx {
                    if i < f.len() {
                        f[i] = true;
                    }
                }
                f
            }
        }
    }
}

/// Complex QZ of the pencil `A' + z B'`.
pub fn qz_decompose<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<GeneralizedSchur> {
    let ac = a.to_complex();
    let bc = b.to_complex();
    if !ac.is_finite() || !bc.is_finite() {
        return Err(TnareError::NonFinite("qz_decompose input"));
    }
    let (mut s, mut t, mut q, mut z) = hessenberg_triangular(&ac, &bc)?;
    iteration::qz_iterate(&mut s, &mut t, &mut q, &mut z)?;
    let n = s.rows();
    let atol = n.max(1) as f64 * f64::EPSILON * ac.frobenius_norm();
    let btol = n.max(1) as f64 * f64::EPSILON * bc.frobenius_norm();
    for i in 0..n {
        for j in 0..i {
            s[(i, j)] = C64::new(0.0, 0.0);
            t[(i, j)] = C64::new(0.0, 0.0);
        }
        if s[(i, i)].norm() <= atol && t[(i, i)].norm() <= btol {
            return Err(TnareError::DegeneratePencil(i));
        }
    }
    let mut gs = GeneralizedSchur { q, z, s, t, eigs: Vec::new(), warnings: Vec::new() };
    gs.refresh_eigs();
    Ok(gs)
}

/// Eigenvalues of `A' + z B'` in QZ order.
pub fn pencil_eigs<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<Vec<Eig>> {
    Ok(qz_decompose(a, b)?.eigs)
}

/// Moves the selected eigenvalues to the leading positions.
pub fn reorder_schur(mut gs: GeneralizedSchur, sel: &EigenSelector) -> GeneralizedSchur {
    let flags = sel.flags(&gs.eigs);
    reorder::reorder_flags(&mut gs, &flags);
    gs
}

/// The first `k` columns of `Z`, a right deflating subspace.
pub fn deflating_subspace(gs: &GeneralizedSchur, k: usize) -> Result<CMatrix> {
    let m = gs.dim();
    if k > m {
        return Err(TnareError::ShapeMismatch(format!("deflating subspace of dimension {k} > {m}")));
    }
    Ok(gs.z.submatrix(0, 0, m, k))
}

/// `max(||A' V - W S_k||, ||B' V - W T_k||) / ||(A', B')||` for the leading `k`
/// columns `V` of `Z` and `W` of `Q`.
pub fn deflating_defect<T: Scalar>(a: &Mat<T>, b: &Mat<T>, gs: &GeneralizedSchur, k: usize) -> f64 {
    let m = gs.dim();
    let v = gs.z.submatrix(0, 0, m, k);
    let w = gs.q.submatrix(0, 0, m, k);
    let sk = gs.s.submatrix(0, 0, k, k);
    let tk = gs.t.submatrix(0, 0, k, k);
    let ac = a.to_complex();
    let bc = b.to_complex();
    let scale = ac.frobenius_norm().hypot(bc.frobenius_norm()).max(f64::MIN_POSITIVE);
    let da = (&(&ac * &v) - &(&w * &sk)).frobenius_norm();
    let db = (&(&bc * &v) - &(&w * &tk)).frobenius_norm();
    da.max(db) / scale
}
