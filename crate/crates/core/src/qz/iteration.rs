//! Single-shift implicit complex QZ on a Hessenberg-triangular pair.

use super::rot::Rot;
use crate::error::{Result, TnareError};
use crate::matrix::CMatrix;
use crate::scalar::C64;

const SWEEPS_PER_EIG: usize = 30;
const EXCEPTIONAL_EVERY: usize = 10;

/// Drives `(H, T)` to upper-triangular `(S, T)` in place, accumulating the
/// transformations into `q` and `z`.
pub(crate) fn qz_iterate(h: &mut CMatrix, t: &mut CMatrix, q: &mut CMatrix, z: &mut CMatrix) -> Result<()> {
    let n = h.rows();
    if n <= 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let hnorm = h.frobenius_norm();
    let tnorm = t.frobenius_norm();
    let h_small = eps * hnorm.max(f64::MIN_POSITIVE);
    let t_small = eps * tnorm.max(f64::MIN_POSITIVE);
    let zero = C64::new(0.0, 0.0);

    let mut ihi = n - 1;
    let mut its_this = 0usize;
    let mut total = 0usize;
    let cap = SWEEPS_PER_EIG * n;
    let mut eshift = zero;

    while ihi > 0 {
        // Locate the top `l` of the unreduced block ending at `ihi`.
        let mut l = ihi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let nb = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            // Relative to the neighbouring diagonal, or absolute in ||H||.
            if sub <= (eps * nb).max(h_small) {
                h[(l, l - 1)] = zero;
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            its_this = 0;
            eshift = zero;
            continue;
        }

        // An (almost) zero diagonal entry of T carries an infinite eigenvalue.
        if let Some(j) = (l..=ihi).find(|&j| t[(j, j)].norm() <= t_small) {
            t[(j, j)] = zero;
            if j == l {
                let (g, r) = Rot::lartg(h[(l, l)], h[(l + 1, l)]);
                g.apply_left(h, l, l + 1, l);
                h[(l, l)] = r;
                h[(l + 1, l)] = zero;
                g.apply_left(t, l, l + 1, l);
                g.accumulate_left(q, l, l + 1);
            } else {
                chase_zero_down(h, t, q, z, j, ihi);
            }
            continue;
        }

        total += 1;
        its_this += 1;
        if total > cap {
            return Err(TnareError::NoConvergence(total - 1));
        }

        let shift = if its_this % EXCEPTIONAL_EVERY == 0 {
            // Perturb by the size of the stalled subdiagonal.
            eshift += h[(ihi, ihi - 1)] / t[(ihi - 1, ihi - 1)];
            h[(ihi, ihi)] / t[(ihi, ihi)] + eshift
        } else {
            wilkinson_shift(h, t, ihi)
        };
        sweep(h, t, q, z, l, ihi, shift);
    }
    Ok(())
}

/// Eigenvalue in the `H - lambda T` sense of the trailing 2x2 pair that is
/// closer to `h22 / t22`.
fn wilkinson_shift(h: &CMatrix, t: &CMatrix, k: usize) -> C64 {
    let (h11, h12, h21, h22) = (h[(k - 1, k - 1)], h[(k - 1, k)], h[(k, k - 1)], h[(k, k)]);
    let (t11, t12, t22) = (t[(k - 1, k - 1)], t[(k - 1, k)], t[(k, k)]);
    // det([h11 - x t11, h12 - x t12; h21, h22 - x t22]) = 0 after dividing by t11 t22.
    let a11 = h11 / t11;
    let a22 = h22 / t22;
    let p = a11 + a22 - h21 * t12 / (t11 * t22);
    let c = (h11 * h22 - h12 * h21) / (t11 * t22);
    let disc = (p * p - c * 4.0).sqrt();
    let r1 = (p + disc) * 0.5;
    let r2 = (p - disc) * 0.5;
    let target = a22;
    let pick = if (r1 - target).norm() <= (r2 - target).norm() { r1 } else { r2 };
    if pick.re.is_finite() && pick.im.is_finite() {
        pick
    } else {
        target
    }
}

fn sweep(h: &mut CMatrix, t: &mut CMatrix, q: &mut CMatrix, z: &mut CMatrix, l: usize, ihi: usize, shift: C64) {
    let n = h.rows();
    let zero = C64::new(0.0, 0.0);
    let x = h[(l, l)] - shift * t[(l, l)];
    let y = h[(l + 1, l)];
    let (mut g, _) = Rot::lartg(x, y);
    for k in l..ihi {
        if k > l {
            let (gk, r) = Rot::lartg(h[(k, k - 1)], h[(k + 1, k - 1)]);
            g = gk;
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = zero;
        }
        g.apply_left(h, k, k + 1, k);
        g.apply_left(t, k, k + 1, k);
        g.accumulate_left(q, k, k + 1);

        let rz = Rot::zeroing_first(t[(k + 1, k)], t[(k + 1, k + 1)]);
        rz.apply_right(t, k, k + 1, k + 2);
        t[(k + 1, k)] = zero;
        rz.apply_right(h, k, k + 1, (k + 3).min(n));
        rz.apply_right(z, k, k + 1, n);
    }
}

/// Moves a zero at `T[j, j]` down to `T[ihi, ihi]` and then deflates it by
/// zeroing `H[ihi, ihi-1]`.
fn chase_zero_down(h: &mut CMatrix, t: &mut CMatrix, q: &mut CMatrix, z: &mut CMatrix, j: usize, ihi: usize) {
    let n = h.rows();
    let zero = C64::new(0.0, 0.0);
    for jch in j..ihi {
        let (g, r) = Rot::lartg(t[(jch, jch + 1)], t[(jch + 1, jch + 1)]);
        g.apply_left(t, jch, jch + 1, jch + 1);
        t[(jch, jch + 1)] = r;
        t[(jch + 1, jch + 1)] = zero;
        g.apply_left(h, jch, jch + 1, jch - 1);
        g.accumulate_left(q, jch, jch + 1);

        let rz = Rot::zeroing_first(h[(jch + 1, jch - 1)], h[(jch + 1, jch)]);
        rz.apply_right(h, jch - 1, jch, (jch + 2).min(n));
        h[(jch + 1, jch - 1)] = zero;
        rz.apply_right(t, jch - 1, jch, jch + 1);
        rz.apply_right(z, jch - 1, jch, n);
    }
    let rz = Rot::zeroing_first(h[(ihi, ihi - 1)], h[(ihi, ihi)]);
    rz.apply_right(h, ihi - 1, ihi, ihi + 1);
    h[(ihi, ihi - 1)] = zero;
    rz.apply_right(t, ihi - 1, ihi, ihi + 1);
    rz.apply_right(z, ihi - 1, ihi, n);
}
