use super::problem::TRiccatiProblem;
use crate::error::{Result, TnareError};
use crate::lu::Lu;
use crate::matrix::{CMatrix, DenseMatrix};
use crate::qz::pencil_eigs;
use crate::scalar::C64;
use crate::svd::sigma_min;

/// Sample points used when none are given.
pub fn default_sample_points() -> Vec<C64> {
    vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)]
}

/// Largest scaled defect of `phi(z) [I; X] = [-X^T; I] alpha(z)` over `zs`
/// (the default points when `zs` is empty).
///
/// Each defect is divided by `(1 + |z|) ||M||_F (1 + ||X||_F)^2`.
pub fn verify_deflating_identity(p: &TRiccatiProblem, x: &DenseMatrix, zs: &[C64]) -> f64 {
    let pts = if zs.is_empty() { default_sample_points() } else { zs.to_vec() };
    let n = p.n();
    let pencil = p.build_linearization();
    let mn = pencil.m.frobenius_norm();
    let basis = DenseMatrix::vstack(&DenseMatrix::identity(n), x).to_complex();
    let left = DenseMatrix::vstack(&(-x.transpose()), &DenseMatrix::identity(n)).to_complex();
    let (ap, aq) = p.alpha_pencil(x);
    let (ap, aq) = (ap.to_complex(), aq.to_complex());
    let xn = x.frobenius_norm();
    pts.iter()
        .map(|&z| {
            let lhs = &pencil.eval(z) * &basis;
            let alpha = &ap + &aq.scale(z);
            let rhs = &left * &alpha;
            (&lhs - &rhs).frobenius_norm() / ((1.0 + z.norm()) * mn * (1.0 + xn).powi(2))
        })
        .fold(0.0, f64::max)
}

/// Same check for the dual solution: `phi(z) [Y; I] = [I; -Y^T] beta(z)`.
pub fn beta_identity_defect(p: &TRiccatiProblem, y: &DenseMatrix) -> f64 {
    let n = p.n();
    let pencil = p.build_linearization();
    let mn = pencil.m.frobenius_norm();
    let basis = DenseMatrix::vstack(y, &DenseMatrix::identity(n)).to_complex();
    let left = DenseMatrix::vstack(&DenseMatrix::identity(n), &(-y.transpose())).to_complex();
    let (bp, bq) = p.beta_pencil(y);
    let (bp, bq) = (bp.to_complex(), bq.to_complex());
    let yn = y.frobenius_norm();
    default_sample_points()
        .iter()
        .map(|&z| {
            let lhs: CMatrix = &pencil.eval(z) * &basis;
            let rhs = &left * &(&bp + &bq.scale(z));
            (&lhs - &rhs).frobenius_norm() / ((1.0 + z.norm()) * mn * (1.0 + yn).powi(2))
        })
        .fold(0.0, f64::max)
}

/// Which of the two equivalent Riccati forms to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DareForm {
    /// `C^T + A^T X = (C + D X)(A - B X)^{-1}(D^T - B^T X)`.
    First,
    /// `C + D X = (C^T + A^T X)(D^T - B^T X)^{-1}(A - B X)`.
    Second,
}

/// Relative defect of the chosen rational form at `X`. Falls back to the
/// other form when the required inverse does not exist.
pub fn verify_dare(p: &TRiccatiProblem, x: &DenseMatrix, form: DareForm) -> Result<(DareForm, f64)> {
    let (alpha0, alpha1) = p.alpha_pencil(x);
    let lhs_first = p.c.transpose() + p.a.tr_matmul(x);
    let lhs_second = &p.c + &(&p.d * x);
    let first = || -> Result<f64> {
        let lu = Lu::factor(&alpha0)?;
        let rhs = &lhs_second * &lu.solve(&alpha1)?;
        Ok((&lhs_first - &rhs).frobenius_norm() / lhs_first.frobenius_norm().max(rhs.frobenius_norm()).max(1.0))
    };
    let second = || -> Result<f64> {
        let lu = Lu::factor(&alpha1)?;
        let rhs = &lhs_first * &lu.solve(&alpha0)?;
        Ok((&lhs_second - &rhs).frobenius_norm() / lhs_second.frobenius_norm().max(rhs.frobenius_norm()).max(1.0))
    };
    let order = match form {
        DareForm::First => [DareForm::First, DareForm::Second],
        DareForm::Second => [DareForm::Second, DareForm::First],
    };
    for f in order {
        let r = match f {
            DareForm::First => first(),
            DareForm::Second => second(),
        };
        if let Ok(v) = r {
            return Ok((f, v));
        }
    }
    Err(TnareError::BothSidesSingular)
}

/// Result of block diagonalizing `M` with `[[I, Y], [X, I]]`.
#[derive(Debug, Clone)]
pub struct BlockDiagonalization {
    /// `sigma_min(I - X Y)`.
    pub coupling_sigma_min: f64,
    /// Relative defect of `M [[I, Y], [X, I]] = [[-X^T, I], [I, -Y^T]] diag(A - BX, D + CY)`.
    pub m_defect: f64,
    /// Relative defect of the same identity for `M^T` with
    /// `diag(D^T - B^T X, A^T + C^T Y)`.
    pub mt_defect: f64,
}

pub fn block_diagonalize(p: &TRiccatiProblem, x: &DenseMatrix, y: &DenseMatrix) -> Result<BlockDiagonalization> {
    let n = p.n();
    let id = DenseMatrix::identity(n);
    let s = sigma_min(&(&id - &(x * y)));
    if s <= 1e3 * f64::EPSILON * (1.0 + x.frobenius_norm() * y.frobenius_norm()) {
        return Err(TnareError::NearSingularCoupling(s));
    }
    let m = p.build_linearization().m;
    let right = DenseMatrix::block2x2(&id, y, x, &id);
    let left = DenseMatrix::block2x2(&(-x.transpose()), &id, &id, &(-y.transpose()));
    let z = DenseMatrix::zeros(n, n);
    let (alpha0, alpha1) = p.alpha_pencil(x);
    let (beta0, beta1) = p.beta_pencil(y);
    let d0 = DenseMatrix::block2x2(&alpha0, &z, &z, &beta0);
    let d1 = DenseMatrix::block2x2(&alpha1, &z, &z, &beta1);
    let scale = m.frobenius_norm() * right.frobenius_norm().powi(2);
    let m_defect = (&(&m * &right) - &(&left * &d0)).frobenius_norm() / scale;
    let mt_defect = (&(&m.transpose() * &right) - &(&left * &d1)).frobenius_norm() / scale;
    Ok(BlockDiagonalization { coupling_sigma_min: s, m_defect, mt_defect })
}

/// Spectral radius of `alpha(z)`, the largest `|lambda|` over its eigenvalues.
pub fn rho_w(p: &TRiccatiProblem, x: &DenseMatrix) -> Result<f64> {
    let (a0, a1) = p.alpha_pencil(x);
    Ok(pencil_eigs(&a0, &a1)?.iter().map(|e| e.modulus()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_root(a: f64, b: f64, c: f64, d: f64) -> (TRiccatiProblem, DenseMatrix) {
        let s = a + d;
        let x = (s - (s * s + 4.0 * b * c).sqrt()) / (2.0 * b);
        (TRiccatiProblem::scalar(a, b, c, d).unwrap(), DenseMatrix::from_rows(&[&[x]]))
    }

    #[test]
    fn scalar_root_certificates() {
        let (p, x) = scalar_root(1.0, 1.0, -1.0, 2.0);
        assert!(verify_deflating_identity(&p, &x, &[]) < 1e-15);
        let (form, d) = verify_dare(&p, &x, DareForm::First).unwrap();
        assert_eq!(form, DareForm::First);
        assert!(d < 1e-13);
        assert!(verify_dare(&p, &x, DareForm::Second).unwrap().1 < 1e-13);
    }

    #[test]
    fn non_solution_has_defect() {
        let (p, x) = scalar_root(1.0, 1.0, -1.0, 2.0);
        let y = x.scale(1.1);
        assert!(verify_deflating_identity(&p, &y, &[]) > 1e-4);
    }

    #[test]
    fn dare_at_zero_with_zero_c() {
        let id = DenseMatrix::identity(2);
        let z = DenseMatrix::zeros(2, 2);
        let p = TRiccatiProblem::new(id.scale(2.0), id.scale(0.3), z.clone(), id.scale(1.5)).unwrap();
        assert_eq!(verify_dare(&p, &z, DareForm::First).unwrap().1, 0.0);
    }

    #[test]
    fn both_sides_singular() {
        // A - B X = 0 and D^T - B^T X = 0 at X = 1.
        let p = TRiccatiProblem::scalar(1.0, 1.0, -1.0, 1.0).unwrap();
        let x = DenseMatrix::identity(1);
        assert_eq!(verify_dare(&p, &x, DareForm::First), Err(TnareError::BothSidesSingular));
    }

    #[test]
    fn scalar_block_diagonalization() {
        // x and the dual root y with 1 - x y != 0.
        let (a, b, c, d) = (1.0, 1.0, -1.0, 2.0);
        let (p, x) = scalar_root(a, b, c, d);
        let s = a + d;
        // c y^2 + (a + d) y - b = 0
        let yv = (-s + (s * s + 4.0 * c * b).sqrt()) / (2.0 * c);
        let y = DenseMatrix::from_rows(&[&[yv]]);
        let bd = block_diagonalize(&p, &x, &y).unwrap();
        assert!(bd.m_defect < 1e-15 && bd.mt_defect < 1e-15, "{bd:?}");
    }

    #[test]
    fn coupling_singularity_detected() {
        let p = TRiccatiProblem::scalar(1.0, 1.0, -1.0, 2.0).unwrap();
        let x = DenseMatrix::identity(1);
        assert!(matches!(block_diagonalize(&p, &x, &x), Err(TnareError::NearSingularCoupling(_))));
    }

    #[test]
    fn rho_w_of_scalar_root() {
        let (p, x) = scalar_root(1.0, 1.0, -1.0, 2.0);
        let want = ((1.0 - x[(0, 0)]) / (2.0 - x[(0, 0)])).abs();
        assert!((rho_w(&p, &x).unwrap() - want).abs() < 1e-15);
    }
}
