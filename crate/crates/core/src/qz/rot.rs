//! Complex plane rotations.

use crate::matrix::CMatrix;
use crate::scalar::C64;

/// `G = [[c, s], [-conj(s), c]]` with real `c`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rot {
    pub c: f64,
    pub s: C64,
}

impl Rot {
    pub const IDENTITY: Rot = Rot { c: 1.0, s: C64 { re: 0.0, im: 0.0 } };

    /// Rotation with `G [f; g] = [r; 0]`; returns `(G, r)`.
    pub fn lartg(f: C64, g: C64) -> (Rot, C64) {
        let gn = g.norm();
        if gn == 0.0 {
            return (Rot::IDENTITY, f);
        }
        let fn_ = f.norm();
        if fn_ == 0.0 {
            return (Rot { c: 0.0, s: g.conj() / gn }, C64::new(gn, 0.0));
        }
        let d = fn_.hypot(gn);
        let phase = f / fn_;
        let rot = Rot { c: fn_ / d, s: phase * g.conj() / d };
        (rot, phase * d)
    }

    /// Right rotation `R` with `[x, y] R = [0, *]`.
    pub fn zeroing_first(x: C64, y: C64) -> Rot {
        Rot::lartg(y, x).0
    }

    /// Rows `i`, `k` of `a` <- `G [row_i; row_k]`, for columns `c0..`.
    pub fn apply_left(&self, a: &mut CMatrix, i: usize, k: usize, c0: usize) {
        let sc = self.s.conj();
        for j in c0..a.cols() {
            let x = a[(i, j)];
            let y = a[(k, j)];
            a[(i, j)] = x * self.c + self.s * y;
            a[(k, j)] = -sc * x + y * self.c;
        }
    }

    /// Columns `i`, `k` of `a` <- `[col_i, col_k] R`, for rows `..r1`.
    pub fn apply_right(&self, a: &mut CMatrix, i: usize, k: usize, r1: usize) {
        let sc = self.s.conj();
        for r in 0..r1.min(a.rows()) {
            let x = a[(r, i)];
            let y = a[(r, k)];
            a[(r, i)] = x * self.c - y * sc;
            a[(r, k)] = x * self.s + y * self.c;
        }
    }

    /// Columns `i`, `k` of `q` <- `[col_i, col_k] G^*`, the accumulation for
    /// a left rotation so that `A = Q H Z^*` is preserved.
    pub fn accumulate_left(&self, q: &mut CMatrix, i: usize, k: usize) {
        for r in 0..q.rows() {
            let x = q[(r, i)];
            let y = q[(r, k)];
            // G^* = [[c, -s], [conj(s), c]]
            q[(r, i)] = x * self.c + y * self.s.conj();
            q[(r, k)] = -x * self.s + y * self.c;
        }
    }
}
