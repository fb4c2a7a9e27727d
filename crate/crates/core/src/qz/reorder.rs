use super::rot::Rot;
use super::{GeneralizedSchur, QzWarning};
use crate::scalar::C64;

/// Pencil magnitudes used by the swap tests, fixed over a reordering pass.
#[derive(Clone, Copy)]
pub(crate) struct SwapScale {
    max_abs: f64,
    frobenius: f64,
}

impl SwapScale {
    pub(crate) fn of(gs: &GeneralizedSchur) -> Self {
        SwapScale {
            max_abs: gs.s.max_abs().max(gs.t.max_abs()).max(f64::MIN_POSITIVE),
            frobenius: gs.s.frobenius_norm().hypot(gs.t.frobenius_norm()),
        }
    }
}

/// Exchanges the adjacent diagonal pairs at `k` and `k + 1`.
pub(crate) fn swap_adjacent(gs: &mut GeneralizedSchur, k: usize, sc: SwapScale) {
    let n = gs.s.rows();
    let (s11, s12, s22) = (gs.s[(k, k)], gs.s[(k, k + 1)], gs.s[(k + 1, k + 1)]);
    let (t11, t12, t22) = (gs.t[(k, k)], gs.t[(k, k + 1)], gs.t[(k + 1, k + 1)]);
    // Right eigenvector of the trailing eigenvalue: (t22 S - s22 T) x = 0.
    let k11 = t22 * s11 - s22 * t11;
    let k12 = t22 * s12 - s22 * t12;
    let xn = k11.norm().hypot(k12.norm());
    let scale = sc.max_abs;
    if xn <= f64::EPSILON * scale * scale {
        // Identical eigenvalues with a decoupled block: nothing to exchange.
        return;
    }
    let x1 = k12 / xn;
    let x2 = -k11 / xn;
    // Z2 = [[x1, -conj(x2)], [x2, conj(x1)]] is Rot { c, s } only up to a
    // phase, so apply it explicitly.
    let apply_z = |m: &mut crate::matrix::CMatrix, rows: usize| {
        for r in 0..rows {
            let a = m[(r, k)];
            let b = m[(r, k + 1)];
            m[(r, k)] = a * x1 + b * x2;
            m[(r, k + 1)] = -a * x2.conj() + b * x1.conj();
        }
    };
    // S and T are upper triangular, so only rows 0..=k+1 are touched.
    apply_z(&mut gs.s, k + 2);
    apply_z(&mut gs.t, k + 2);
    apply_z(&mut gs.z, n);

    let s_col = gs.s[(k, k)].norm().hypot(gs.s[(k + 1, k)].norm());
    let t_col = gs.t[(k, k)].norm().hypot(gs.t[(k + 1, k)].norm());
    let (f, g) = if s_col >= t_col { (gs.s[(k, k)], gs.s[(k + 1, k)]) } else { (gs.t[(k, k)], gs.t[(k + 1, k)]) };
    let (rot, _) = Rot::lartg(f, g);
    rot.apply_left(&mut gs.s, k, k + 1, k);
    rot.apply_left(&mut gs.t, k, k + 1, k);
    rot.accumulate_left(&mut gs.q, k, k + 1);

    let resid = gs.s[(k + 1, k)].norm().hypot(gs.t[(k + 1, k)].norm());
    let pencil = sc.frobenius;
    if resid > 1e3 * f64::EPSILON * pencil {
        gs.warnings.push(QzWarning::SwapIllConditioned { position: k, residual: resid / pencil });
    }
    gs.s[(k + 1, k)] = C64::new(0.0, 0.0);
    gs.t[(k + 1, k)] = C64::new(0.0, 0.0);
}

/// Moves the pairs flagged in `select` (original positions) to the front,
/// keeping their relative order.
pub(crate) fn reorder_flags(gs: &mut GeneralizedSchur, select: &[bool]) {
    let sc = SwapScale::of(gs);
    let mut dst = 0;
    for (i, &sel) in select.iter().enumerate() {
        if !sel {
            continue;
        }
        for k in (dst..i).rev() {
            swap_adjacent(gs, k, sc);
        }
        dst += 1;
    }
    gs.refresh_eigs();
}
