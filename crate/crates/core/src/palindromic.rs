//! Anti-triangular Schur form of `M + z M^T` and its anti-diagonal
//! reordering.
//!
//! A `2n x 2n` matrix `R` is anti-triangular when `r_ij = 0` for
//! `i + j < 2n - 1` (0-based). For `R = U^T M U` with `U` unitary the pencil
//! `R + z R^T` has the eigenvalues `lambda_j = -r_{2n-1-j, j} / r_{j, 2n-1-j}`
//! and `lambda_j lambda_{2n-1-j} = 1`.

use crate::error::{Result, TnareError};
use crate::lu::{lu_solve, Lu};
use crate::matrix::{CMatrix, Mat};
use crate::qr::qr_householder;
use crate::qz::{qz_decompose, reorder_schur, Eig, EigenSelector};
use crate::scalar::{Scalar, C64};
use crate::tsylvester::TSylvester;

/// Default half-width of the band around the unit circle inside which an
/// eigenvalue is treated as ambiguous.
pub const DEFAULT_UNIT_BAND: f64 = 1e-12;

const REFINE_MAX: usize = 20;

/// `R = U^T M U` with `U` unitary and `R` anti-triangular.
#[derive(Debug, Clone)]
pub struct AntiTriangularForm {
    pub u: CMatrix,
    pub r: CMatrix,
    /// `lambda_1, ..., lambda_2n` read off the anti-diagonal.
    pub spectrum: Vec<Eig>,
    /// Largest entry above the anti-diagonal before it was cleared, relative
    /// to `||M||_F`.
    pub defect: f64,
}

impl AntiTriangularForm {
    pub fn half(&self) -> usize {
        self.u.rows() / 2
    }

    /// `max_{i+j<2n-1} |r_ij| / ||M||_F` of the stored (cleared) `R`.
    pub fn anti_triangularity(&self, m_norm: f64) -> f64 {
        anti_triangular_defect(&self.r) / m_norm.max(f64::MIN_POSITIVE)
    }

    /// `X = U_21 U_11^{-1}` from the leading `n` columns.
    pub fn graph_solution(&self) -> Result<CMatrix> {
        let n = self.half();
        let u11 = self.u.submatrix(0, 0, n, n);
        let u21 = self.u.submatrix(n, 0, n, n);
        graph_from_basis(&u11, &u21)
    }
}

/// `X = V_2 V_1^{-1}`, failing when `V_1` is numerically singular.
pub(crate) fn graph_from_basis(v1: &CMatrix, v2: &CMatrix) -> Result<CMatrix> {
    let n = v1.rows();
    let smin = crate::svd::sigma_min(v1);
    let smax = crate::svd::singular_values(v1).first().copied().unwrap_or(0.0);
    if smin <= n.max(1) as f64 * f64::EPSILON * smax || smin == 0.0 {
        return Err(TnareError::GraphConditionFailed { sigma_min: smin });
    }
    match Lu::factor(v1) {
        Ok(lu) => lu.solve_right(v2),
        Err(_) => Err(TnareError::GraphConditionFailed { sigma_min: smin }),
    }
}

/// `max_{i+j<2n-1} |r_ij|`.
pub fn anti_triangular_defect<T: Scalar>(r: &Mat<T>) -> f64 {
    let m = r.rows();
    let mut d: f64 = 0.0;
    for i in 0..m {
        for j in 0..m.saturating_sub(1).saturating_sub(i) {
            d = d.max(r[(i, j)].abs());
        }
    }
    d
}

fn clear_above_anti_diagonal(r: &mut CMatrix) {
    let m = r.rows();
    for i in 0..m {
        for j in 0..m.saturating_sub(1).saturating_sub(i) {
            r[(i, j)] = C64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues `lambda_j = -r_{2n-1-j, j} / r_{j, 2n-1-j}` of `R + z R^T`.
pub fn palindromic_spectrum<T: Scalar>(r: &Mat<T>) -> Result<Vec<Eig>> {
    let m = r.rows();
    if !r.is_square() || m % 2 != 0 {
        return Err(TnareError::ShapeMismatch(format!("anti-triangular matrix must be 2n x 2n, got {m}x{}", r.cols())));
    }
    let tiny = m as f64 * f64::EPSILON * r.frobenius_norm();
    (0..m)
        .map(|j| {
            let p = m - 1 - j;
            let alpha = r[(p, j)].to_c64();
            let beta = r[(j, p)].to_c64();
            if alpha.norm() <= tiny && beta.norm() <= tiny {
                Err(TnareError::IrregularPencil(j))
            } else {
                Ok(Eig::new(alpha, beta))
            }
        })
        .collect()
}

/// `||V^T M V||_F / (||V||_F^2 ||M||_F)`.
pub fn isotropy_defect<T: Scalar>(v: &Mat<T>, m: &Mat<T>) -> f64 {
    let den = v.frobenius_norm().powi(2) * m.frobenius_norm();
    if den == 0.0 {
        return 0.0;
    }
    (v.transpose() * m * v).frobenius_norm() / den
}

/// Fails with `NearSingularPencil` when `det(M + z M^T)` vanishes numerically
/// at every sample point.
fn check_regular(m: &CMatrix) -> Result<()> {
    let samples = [C64::new(0.31, 0.72), C64::new(-0.57, 0.19), C64::new(1.37, -0.43), C64::new(0.0, -2.1)];
    let mt = m.transpose();
    for z in samples {
        if Lu::factor(&(m + &mt.scale(z))).is_ok() {
            return Ok(());
        }
    }
    Err(TnareError::NearSingularPencil)
}

/// Greedy reciprocal pairing; returns, for each pair, the index kept in the
/// first half (smaller modulus, ties broken toward `Im(lambda) >= 0`).
fn reciprocal_free_half(eigs: &[Eig]) -> Vec<usize> {
    let m = eigs.len();
    let mut used = vec![false; m];
    let mut keep = Vec::with_capacity(m / 2);
    for i in 0..m {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (j, e) in eigs.iter().enumerate() {
            if used[j] {
                continue;
            }
            let lhs = eigs[i].alpha * e.alpha - eigs[i].beta * e.beta;
            let scale = (eigs[i].alpha.norm() + eigs[i].beta.norm()) * (e.alpha.norm() + e.beta.norm());
            let d = lhs.norm() / scale.max(f64::MIN_POSITIVE);
            if d < best_d {
                best_d = d;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        used[j] = true;
        let (ai, bi, aj, bj) = (eigs[i].alpha.norm(), eigs[i].beta.norm(), eigs[j].alpha.norm(), eigs[j].beta.norm());
        // |lambda_i| < |lambda_j|  <=>  a_i b_j < a_j b_i
        let (li, lj) = (ai * bj, aj * bi);
        let pick = if (li - lj).abs() <= 8.0 * f64::EPSILON * (li + lj) {
            let im_i = eigs[i].lambda().map_or(0.0, |l| l.im);
            if im_i >= 0.0 { i } else { j }
        } else if li < lj {
            i
        } else {
            j
        };
        keep.push(pick);
    }
    keep
}

/// Computes a unitary `U` with `U^T M U` anti-triangular.
///
/// Stage one takes the deflating subspace of `M + z M^T` for a
/// reciprocal-free half of the spectrum (smaller modulus of each pair) by
/// ordered QZ and polishes its `M`-isotropy with Newton steps on
/// `V^T M V = 0`. Stage two triangularizes the off-diagonal blocks of the
/// resulting block anti-triangular matrix with one more QZ.
pub fn anti_triangular_schur<T: Scalar>(m: &Mat<T>) -> Result<AntiTriangularForm> {
    let mc = m.to_complex();
    let dim = mc.rows();
    if !mc.is_square() || dim % 2 != 0 || dim == 0 {
        return Err(TnareError::ShapeMismatch(format!("M must be 2n x 2n, got {}x{}", mc.rows(), mc.cols())));
    }
    if !mc.is_finite() {
        return Err(TnareError::NonFinite("anti_triangular_schur input"));
    }
    let n = dim / 2;
    let mnorm = mc.frobenius_norm();
    check_regular(&mc)?;

    let u = if anti_triangular_defect(&mc) <= f64::EPSILON * mnorm {
        CMatrix::identity(dim)
    } else {
        let u0 = isotropic_basis(&mc, n)?;
        let r0 = u0.transpose() * &mc * &u0;
        let r21 = r0.submatrix(n, 0, n, n);
        let r12 = r0.submatrix(0, n, n, n);
        let gs = qz_decompose(&r21, &r12.transpose())?;
        // P = Zz, Q = conj(Qz) J
        let p = gs.z;
        let qmat = CMatrix::from_fn(n, n, |i, j| gs.q[(i, n - 1 - j)].conj());
        let mut bd = CMatrix::zeros(dim, dim);
        bd.set_block(0, 0, &p);
        bd.set_block(n, n, &qmat);
        u0 * bd
    };
    finish_form(u, &mc, mnorm)
}

fn finish_form(u: CMatrix, mc: &CMatrix, mnorm: f64) -> Result<AntiTriangularForm> {
    let mut r = u.transpose() * mc * &u;
    let defect = anti_triangular_defect(&r) / mnorm.max(f64::MIN_POSITIVE);
    clear_above_anti_diagonal(&mut r);
    let spectrum = palindromic_spectrum(&r)?;
    Ok(AntiTriangularForm { u, r, spectrum, defect })
}

/// Unitary `U0 = [V, V_perp]` whose leading columns span an isotropic
/// deflating subspace for a reciprocal-free half of the spectrum.
fn isotropic_basis(mc: &CMatrix, n: usize) -> Result<CMatrix> {
    let dim = 2 * n;
    let mnorm = mc.frobenius_norm();
    let gs = qz_decompose(mc, &mc.transpose())?;
    let keep = reciprocal_free_half(&gs.eigs);
    if keep.len() != n {
        return Err(TnareError::NearSingularPencil);
    }
    let gs = reorder_schur(gs, &EigenSelector::Indices(keep));
    let v = gs.z.submatrix(0, 0, dim, n);
    let (mut u0, _) = qr_householder(&v)?;

    let target = 4.0 * n as f64 * f64::EPSILON * mnorm;
    let mut best = u0.clone();
    let mut best_r11 = f64::INFINITY;
    for _ in 0..REFINE_MAX {
        let r = u0.transpose() * mc * &u0;
        let r11 = r.submatrix(0, 0, n, n);
        let r11n = r11.frobenius_norm();
        if r11n < best_r11 {
            best_r11 = r11n;
            best = u0.clone();
        }
        if r11n <= target {
            break;
        }
        // (V + V_perp H)^T M (V + V_perp H) = 0 to first order in H.
        let r12 = r.submatrix(0, n, n, n);
        let r21 = r.submatrix(n, 0, n, n);
        let Ok(h) = TSylvester::new(&r12, &r21).and_then(|s| s.solve(&(-&r11))) else {
            break;
        };
        let basis = &u0 * &CMatrix::vstack(&CMatrix::identity(n), &h);
        u0 = qr_householder(&basis)?.0;
    }
    Ok(best)
}

/// Solves the reordering system
/// `[[R31 I, R22^T], [R13 I, R22]] [Y; Z] = -[R32^T; R23]` and returns
/// `(Y, Z, W)` with `W = -(R33 + R32 Z + Z^T R23 + Z^T R22 Z) / (R31 + R13)`.
pub fn tsylvester_reorder_solve(
    r31: C64,
    r13: C64,
    r33: C64,
    r22: &CMatrix,
    r32: &CMatrix,
    r23: &CMatrix,
) -> Result<(CMatrix, CMatrix, C64)> {
    let b = r22.rows();
    let denom = r31 + r13;
    let scale = r31.norm() + r13.norm();
    if denom.norm() <= 8.0 * f64::EPSILON * scale || denom.norm() == 0.0 {
        return Err(TnareError::DivisionByZero("R31 + R13 in the reordering step"));
    }
    let (y, z) = if b == 0 {
        (CMatrix::zeros(0, 1), CMatrix::zeros(0, 1))
    } else {
        let k = reorder_kronecker_matrix(r31, r13, r22);
        let rhs = -CMatrix::vstack(&r32.transpose(), r23);
        let sol = lu_solve(&k, &rhs).map_err(|e| TnareError::ReorderSingular(e.to_string()))?;
        (sol.submatrix(0, 0, b, 1), sol.submatrix(b, 0, b, 1))
    };
    let mut num = r33;
    if b > 0 {
        num += (r32 * &z)[(0, 0)] + (z.transpose() * r23)[(0, 0)] + (z.transpose() * r22 * &z)[(0, 0)];
    }
    Ok((y, z, -num / denom))
}

/// `[[R31 I, R22^T], [R13 I, R22]]`.
pub fn reorder_kronecker_matrix(r31: C64, r13: C64, r22: &CMatrix) -> CMatrix {
    let b = r22.rows();
    let id = CMatrix::identity(b);
    CMatrix::block2x2(&id.scale(r31), &r22.transpose(), &id.scale(r13), r22)
}

/// Which half of the spectrum should end up in the leading `n` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Inside,
    Outside,
}

impl Region {
    pub fn contains(&self, e: &Eig) -> bool {
        match self {
            Region::Inside => e.is_inside(),
            Region::Outside => e.is_outside(),
        }
    }
}

/// Swaps anti-diagonal pairs until `lambda_1, ..., lambda_n` all lie in
/// `target`. Each step moves the outermost misplaced eigenvalue across the
/// middle, so the number of steps is at most `n`.
pub fn pqz_reorder<T: Scalar>(atf: &AntiTriangularForm, m: &Mat<T>, target: Region, delta: f64) -> Result<AntiTriangularForm> {
    let mc = m.to_complex();
    let mnorm = mc.frobenius_norm();
    let dim = atf.u.rows();
    let n = dim / 2;
    if let Some(e) = atf.spectrum.iter().find(|e| e.near_unit_circle(delta)) {
        return Err(TnareError::UnitCircleAmbiguity { modulus: e.modulus(), delta });
    }
    let mut form = atf.clone();
    let mut prev_k = usize::MAX;
    loop {
        // 1-based: k = max{i : lambda_i in target} - n.
        let last = form.spectrum.iter().rposition(|e| target.contains(e)).map(|i| i + 1).unwrap_or(0);
        if last <= n {
            return Ok(form);
        }
        let k = last - n;
        if k >= prev_k {
            return Err(TnareError::ReorderSingular(format!("misplaced count did not decrease (k = {k})")));
        }
        prev_k = k;
        let lo = n - k;
        let size = 2 * k;
        let r1 = form.r.submatrix(lo, lo, size, size);
        let b = size - 2;
        let r13 = r1[(0, size - 1)];
        let r31 = r1[(size - 1, 0)];
        let r33 = r1[(size - 1, size - 1)];
        let r22 = r1.submatrix(1, 1, b, b);
        let r23 = r1.submatrix(1, size - 1, b, 1);
        let r32 = r1.submatrix(size - 1, 1, 1, b);
        let (y, z, w) = tsylvester_reorder_solve(r31, r13, r33, &r22, &r32, &r23)?;
        // T = [[W, Y^T, 1], [Z, I, 0], [1, 0, 0]]
        let mut t = CMatrix::zeros(size, size);
        t[(0, 0)] = w;
        t[(0, size - 1)] = C64::new(1.0, 0.0);
        t[(size - 1, 0)] = C64::new(1.0, 0.0);
        for i in 0..b {
            t[(0, 1 + i)] = y[(i, 0)];
            t[(1 + i, 0)] = z[(i, 0)];
            t[(1 + i, 1 + i)] = C64::new(1.0, 0.0);
        }
        let (p, _) = qr_householder(&t)?;
        let mut embed = CMatrix::identity(dim);
        embed.set_block(lo, lo, &p);
        let u = &form.u * &embed;
        form = finish_form(u, &mc, mnorm)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::qz::pencil_eigs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn check_form(m: &DenseMatrix, f: &AntiTriangularForm) {
        let dim = m.rows();
        let mc = m.to_complex();
        let id = CMatrix::identity(dim);
        assert!((&(f.u.adjoint() * &f.u) - &id).frobenius_norm() < 1e-12);
        assert!((&(f.u.transpose() * &mc * &f.u) - &f.r).frobenius_norm() < 1e-10 * mc.frobenius_norm());
        assert!(f.defect < 1e-10);
        for j in 0..dim / 2 {
            assert!(f.spectrum[j].is_reciprocal_of(&f.spectrum[dim - 1 - j], 1e-8));
        }
    }

    #[test]
    fn spectrum_formula() {
        let r = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let s = palindromic_spectrum(&r).unwrap();
        assert!(s.iter().all(|e| (e.lambda().unwrap() - c(-1.0)).norm() < 1e-15));
        let r = DenseMatrix::from_rows(&[&[0.0, 0.0, 0.0, 2.0], &[0.0, 0.0, 1.0, 1.0], &[0.0, 3.0, 1.0, 1.0], &[1.0, 1.0, 1.0, 1.0]]);
        let s = palindromic_spectrum(&r).unwrap();
        assert!((s[0].lambda().unwrap() - c(-0.5)).norm() < 1e-15);
        assert!((s[3].lambda().unwrap() - c(-2.0)).norm() < 1e-15);
        let bad = DenseMatrix::from_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
        assert!(matches!(palindromic_spectrum(&bad), Err(TnareError::IrregularPencil(0))));
    }

    #[test]
    fn already_anti_triangular_uses_identity() {
        let (a, b) = (3.0, -0.5);
        let m = DenseMatrix::from_rows(&[&[0.0, a], &[b, 2.0]]);
        let f = anti_triangular_schur(&m).unwrap();
        assert_eq!(f.u, CMatrix::identity(2));
        assert!((f.spectrum[0].lambda().unwrap() - c(-b / a)).norm() < 1e-15);
        assert!((f.spectrum[1].lambda().unwrap() - c(-a / b)).norm() < 1e-15);
    }

    #[test]
    fn singular_pencil_rejected() {
        // M + z M^T = (1 + z) diag(1, 0) is singular for every z.
        let m = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(anti_triangular_schur(&m), Err(TnareError::NearSingularPencil)));
    }

    #[test]
    fn random_forms_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 1..6 {
            let m = DenseMatrix::from_fn(2 * n, 2 * n, |_, _| rng.random_range(-1.0..1.0));
            let f = anti_triangular_schur(&m).unwrap();
            check_form(&m, &f);
            let qz = pencil_eigs(&m, &m.transpose()).unwrap();
            for e in &f.spectrum {
                let l = e.lambda().unwrap();
                let d = qz.iter().map(|q| (q.lambda().unwrap() - l).norm() / (1.0 + l.norm())).fold(f64::INFINITY, f64::min);
                assert!(d < 1e-6, "n = {n}: {l} missing from QZ spectrum");
            }
        }
    }

    #[test]
    fn reorder_kronecker_layout() {
        let r22 = CMatrix::from_rows(&[&[c(0.0), c(2.0)], &[c(3.0), c(4.0)]]);
        let k = reorder_kronecker_matrix(c(5.0), c(7.0), &r22);
        assert_eq!(k[(0, 0)], c(5.0));
        assert_eq!(k[(0, 3)], c(3.0));
        assert_eq!(k[(2, 0)], c(7.0));
        assert_eq!(k[(3, 3)], c(4.0));
    }

    #[test]
    fn reorder_empty_middle() {
        let (y, z, w) = tsylvester_reorder_solve(c(2.0), c(3.0), c(10.0), &CMatrix::zeros(0, 0), &CMatrix::zeros(1, 0), &CMatrix::zeros(0, 1)).unwrap();
        assert_eq!(y.rows(), 0);
        assert_eq!(z.rows(), 0);
        assert!((w - c(-2.0)).norm() < 1e-15);
        assert!(tsylvester_reorder_solve(c(1.0), c(-1.0), c(1.0), &CMatrix::zeros(0, 0), &CMatrix::zeros(1, 0), &CMatrix::zeros(0, 1)).is_err());
    }

    #[test]
    fn reorder_system_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut g = || c(rng.random_range(-1.0..1.0));
        let mut r22 = CMatrix::zeros(2, 2);
        r22[(0, 1)] = g();
        r22[(1, 0)] = g();
        r22[(1, 1)] = g();
        let r32 = CMatrix::from_rows(&[&[g(), g()]]);
        let r23 = CMatrix::from_rows(&[&[g()], &[g()]]);
        let (r31, r13, r33) = (g() + c(2.0), g() + c(3.0), g());
        let (y, z, _) = tsylvester_reorder_solve(r31, r13, r33, &r22, &r32, &r23).unwrap();
        let e1 = &(&y.scale(r31) + &(r22.transpose() * &z)) + &r32.transpose();
        let e2 = &(&y.scale(r13) + &(&r22 * &z)) + &r23;
        assert!(e1.frobenius_norm() < 1e-12 && e2.frobenius_norm() < 1e-12);
    }

    #[test]
    fn single_swap_for_n_equal_one() {
        let m = DenseMatrix::from_rows(&[&[0.0, 2.0], &[1.0, 0.7]]);
        let f = anti_triangular_schur(&m).unwrap();
        assert!(f.spectrum[0].is_inside());
        let g = pqz_reorder(&f, &m, Region::Outside, DEFAULT_UNIT_BAND).unwrap();
        check_form(&m, &g);
        assert!((g.spectrum[0].lambda().unwrap() - c(-2.0)).norm() < 1e-12);
    }

    #[test]
    fn reorder_targets_both_halves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        for trial in 0..40 {
            let n = 2 + trial % 4;
            let m = DenseMatrix::from_fn(2 * n, 2 * n, |_, _| rng.random_range(-1.0..1.0));
            let f = anti_triangular_schur(&m).unwrap();
            // Unit-modulus eigenvalues are generic for real palindromic pencils.
            if f.spectrum.iter().any(|e| e.near_unit_circle(1e-6)) {
                continue;
            }
            let inside = pqz_reorder(&f, &m, Region::Inside, DEFAULT_UNIT_BAND).unwrap();
            assert_eq!(inside.u, f.u, "first half is already inside");
            let out = pqz_reorder(&f, &m, Region::Outside, DEFAULT_UNIT_BAND).unwrap();
            check_form(&m, &out);
            assert!(out.spectrum[..n].iter().all(Eig::is_outside));
            assert!(isotropy_defect(&out.u.submatrix(0, 0, 2 * n, n), &m.to_complex()) < 1e-12);
            checked += 1;
        }
        assert!(checked >= 5, "only {checked} usable draws");
    }

    #[test]
    fn isotropy_defect_cases() {
        let m = DenseMatrix::from_rows(&[&[0.0, 1.0], &[2.0, 3.0]]);
        let e1 = DenseMatrix::from_rows(&[&[1.0], &[0.0]]);
        assert_eq!(isotropy_defect(&e1, &m), 0.0);
        assert!(isotropy_defect(&DenseMatrix::identity(2), &m) > 0.1);
    }
}
