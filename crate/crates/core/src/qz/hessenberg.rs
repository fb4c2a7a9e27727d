use super::rot::Rot;
use crate::error::{Result, TnareError};
use crate::matrix::CMatrix;
use crate::qr::qr_householder;
use crate::scalar::C64;

/// Reduces `(A', B')` to `(H, T)` with `H` upper Hessenberg, `T` upper
/// triangular, `A' = Q H Z^*` and `B' = Q T Z^*`.
pub fn hessenberg_triangular(a: &CMatrix, b: &CMatrix) -> Result<(CMatrix, CMatrix, CMatrix, CMatrix)> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(TnareError::ShapeMismatch(format!(
            "pencil blocks {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    let (q, t) = qr_householder(b)?;
    let mut h = q.adjoint() * a;
    let mut t = t;
    let mut q = q;
    let mut z = CMatrix::identity(n);
    let zero = C64::new(0.0, 0.0);
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            if h[(i, j)] == zero {
                continue;
            }
            let (g, r) = Rot::lartg(h[(i - 1, j)], h[(i, j)]);
            g.apply_left(&mut h, i - 1, i, j);
            h[(i - 1, j)] = r;
            h[(i, j)] = zero;
            g.apply_left(&mut t, i - 1, i, i - 1);
            g.accumulate_left(&mut q, i - 1, i);

            let rz = Rot::zeroing_first(t[(i, i - 1)], t[(i, i)]);
            rz.apply_right(&mut t, i - 1, i, i + 1);
            t[(i, i - 1)] = zero;
            rz.apply_right(&mut h, i - 1, i, n);
            rz.apply_right(&mut z, i - 1, i, n);
        }
    }
    Ok((h, t, q, z))
}
