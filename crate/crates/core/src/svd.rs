//! Singular values by one-sided Jacobi. Used for conditioning checks only.

use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Singular values in decreasing order.
pub fn singular_values<T: Scalar>(a: &Mat<T>) -> Vec<f64> {
    let w = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let (m, n) = w.shape();
    // Columns stored contiguously for the rotation loops.
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| w.col(j)).collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut g = T::zero();
                    let mut al = 0.0;
                    let mut be = 0.0;
                    for i in 0..m {
                        g += cp[i].conj() * cq[i];
                        al += cp[i].abs2();
                        be += cq[i].abs2();
                    }
                    (al, be, g)
                };
                let gabs = gamma.abs();
                if gabs <= f64::EPSILON * (alpha * beta).sqrt() || gabs == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.scale(1.0 / gabs);
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let xp = cols[p][i];
                    let xq = cols[q][i] * phase.conj();
                    cols[p][i] = xp.scale(c) - xq.scale(s);
                    cols[q][i] = (xp.scale(s) + xq.scale(c)) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x.abs2()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Smallest singular value (0 for an empty matrix).
pub fn sigma_min<T: Scalar>(a: &Mat<T>) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Largest principal-angle sine between the column spans of two matrices
/// with orthonormal columns.
pub fn subspace_distance<T: Scalar>(u: &Mat<T>, v: &Mat<T>) -> f64 {
    let c = u.adjoint() * v;
    let smin = sigma_min(&c).min(1.0);
    (1.0 - smin * smin).max(0.0).sqrt()
}
