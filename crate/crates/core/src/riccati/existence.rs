use super::problem::TRiccatiProblem;
use crate::lu::Lu;
use crate::matrix::DenseMatrix;
use crate::qz::pencil_eigs;
use crate::tsylvester::{tsylvester_operator, TSylvester};

/// Largest `n` for which the `n^2 x n^2` operator `W` is formed explicitly.
pub const W_EXPLICIT_MAX: usize = 40;

/// Outcome of the sign and M-matrix hypotheses for the minimal nonnegative
/// solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ExistenceReport {
    /// `W = I (x) D + (A^T (x) I) Pi` is nonsingular.
    pub w_nonsingular: bool,
    /// `W^{-1} >= 0`; `None` when `n > W_EXPLICIT_MAX`.
    pub w_inverse_nonnegative: Option<bool>,
    pub d_inverse_nonnegative: bool,
    pub b_nonnegative: bool,
    pub c_nonpositive: bool,
    /// Positive `(u, v)` with `A u - B v >= 0` and `C u + D v >= 0`, if the
    /// search found one. `None` is inconclusive.
    pub uv: Option<(Vec<f64>, Vec<f64>)>,
    /// `[[A, -B], [C, D]]` is an M-matrix.
    pub m_hat_is_m_matrix: bool,
}

impl ExistenceReport {
    /// All checked hypotheses hold (an unchecked `W^{-1} >= 0` counts as failed).
    pub fn all_hold(&self) -> bool {
        self.w_nonsingular
            && self.w_inverse_nonnegative == Some(true)
            && self.d_inverse_nonnegative
            && self.b_nonnegative
            && self.c_nonpositive
            && self.uv.is_some()
    }
}

fn tol_for(m: &DenseMatrix) -> f64 {
    1e3 * f64::EPSILON * m.max_abs().max(1.0)
}

pub fn check_existence_assumptions(p: &TRiccatiProblem) -> ExistenceReport {
    let n = p.n();
    let (w_nonsingular, w_inverse_nonnegative) = if n <= W_EXPLICIT_MAX {
        match Lu::factor(&tsylvester_operator(&p.d, &p.a)).and_then(|lu| lu.inverse()) {
            Ok(wi) => {
                let t = tol_for(&wi);
                (true, Some(wi.is_nonnegative(t)))
            }
            Err(_) => (false, Some(false)),
        }
    } else {
        (TSylvester::new(&p.d, &p.a).is_ok(), None)
    };
    let d_inverse_nonnegative = match crate::lu::inverse(&p.d) {
        Ok(di) => di.is_nonnegative(tol_for(&di)),
        Err(_) => false,
    };
    ExistenceReport {
        w_nonsingular,
        w_inverse_nonnegative,
        d_inverse_nonnegative,
        b_nonnegative: p.b.is_nonnegative(0.0),
        c_nonpositive: (-&p.c).is_nonnegative(0.0),
        uv: find_uv(p),
        m_hat_is_m_matrix: is_m_matrix(&m_hat(p)),
    }
}

/// `[[A, -B], [C, D]]`.
pub fn m_hat(p: &TRiccatiProblem) -> DenseMatrix {
    DenseMatrix::block2x2(&p.a, &(-&p.b), &p.c, &p.d)
}

fn uv_ok(mh: &DenseMatrix, w: &DenseMatrix) -> bool {
    if w.as_slice().iter().any(|&x| x <= 0.0) {
        return false;
    }
    let r = mh * w;
    let t = 1e3 * f64::EPSILON * mh.max_abs() * w.max_abs();
    r.as_slice().iter().all(|&x| x >= -t)
}

/// Heuristic search: the all-ones vector first, then normalized iterates
/// `w <- M_hat^{-1} w` started from ones.
pub fn find_uv(p: &TRiccatiProblem) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = p.n();
    let mh = m_hat(p);
    let split = |w: &DenseMatrix| (w.as_slice()[..n].to_vec(), w.as_slice()[n..].to_vec());
    let mut w = DenseMatrix::from_fn(2 * n, 1, |_, _| 1.0);
    if uv_ok(&mh, &w) {
        return Some(split(&w));
    }
    let lu = Lu::factor(&mh).ok()?;
    for _ in 0..50 {
        w = lu.solve(&w).ok()?;
        let s = w.max_abs();
        if s == 0.0 || !s.is_finite() {
            return None;
        }
        // keep the sign that makes the leading entry positive
        let sign = if w.as_slice()[0] < 0.0 { -1.0 } else { 1.0 };
        w = w.scale(sign / s);
        if uv_ok(&mh, &w) {
            return Some(split(&w));
        }
    }
    None
}

/// `M = sigma I - H` with `H >= 0` and `rho(H) <= sigma`, where
/// `sigma = max_i m_ii`.
pub fn is_m_matrix(m: &DenseMatrix) -> bool {
    let n = m.rows();
    if !m.is_square() || n == 0 {
        return false;
    }
    let t = tol_for(m);
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] > t {
                return false;
            }
        }
    }
    let sigma = (0..n).map(|i| m[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
    if sigma < 0.0 {
        return false;
    }
    let h = &DenseMatrix::identity(n).scale(sigma) - m;
    match pencil_eigs(&h, &(-DenseMatrix::identity(n))) {
        Ok(eigs) => eigs.iter().map(|e| e.modulus()).fold(0.0, f64::max) <= sigma * (1.0 + 1e-12) + t,
        Err(_) => false,
    }
}
