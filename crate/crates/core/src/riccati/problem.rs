use std::path::Path;

use crate::error::{Result, TnareError};
use crate::io;
use crate::matrix::DenseMatrix;
use crate::qz::{pencil_eigs, Eig};

/// Coefficients of `D X + X^T A - X^T B X + C = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TRiccatiProblem {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub c: DenseMatrix,
    pub d: DenseMatrix,
}

/// Relative residual `||R(X)||_F / ||X||_F`, or the absolute residual when
/// `X = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub absolute: bool,
}

/// `phi(z) = M + z M^T` with `M = [[C, D], [A, -B]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PalindromicPencil {
    pub m: DenseMatrix,
}

impl PalindromicPencil {
    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// Eigenvalues of `M + z M^T` by QZ.
    pub fn eigs(&self) -> Result<Vec<Eig>> {
        pencil_eigs(&self.m, &self.m.transpose())
    }

    /// `M + z M^T` evaluated at a complex point.
    pub fn eval(&self, z: crate::scalar::C64) -> crate::matrix::CMatrix {
        let mc = self.m.to_complex();
        &mc + &mc.transpose().scale(z)
    }
}

impl TRiccatiProblem {
    pub fn new(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix, d: DenseMatrix) -> Result<Self> {
        let n = a.rows();
        for (name, m) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            if m.shape() != (n, n) {
                return Err(TnareError::ShapeMismatch(format!("{name} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
            }
            if !m.is_finite() {
                return Err(TnareError::NonFinite("problem coefficients"));
            }
        }
        if n == 0 {
            return Err(TnareError::ShapeMismatch("empty problem".into()));
        }
        Ok(TRiccatiProblem { a, b, c, d })
    }

    /// Scalar problem `d x + x a - b x^2 + c = 0`.
    pub fn scalar(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let s = |v: f64| DenseMatrix::from_rows(&[&[v]]);
        Self::new(s(a), s(b), s(c), s(d))
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// `R(X) = D X + X^T A - X^T B X + C`.
    pub fn residual_matrix(&self, x: &DenseMatrix) -> DenseMatrix {
        let xt_b = x.tr_matmul(&self.b);
        &self.d * x + x.tr_matmul(&self.a) - &xt_b * x + &self.c
    }

    pub fn residual(&self, x: &DenseMatrix) -> Residual {
        let r = self.residual_matrix(x).frobenius_norm();
        let xn = x.frobenius_norm();
        if xn == 0.0 {
            Residual { value: r, absolute: true }
        } else {
            Residual { value: r / xn, absolute: false }
        }
    }

    pub fn build_linearization(&self) -> PalindromicPencil {
        PalindromicPencil { m: DenseMatrix::block2x2(&self.c, &self.d, &self.a, &(-&self.b)) }
    }

    /// `(A - B X, D^T - B^T X)`, the coefficients of `alpha(z)`.
    pub fn alpha_pencil(&self, x: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
        (&self.a - &(&self.b * x), self.d.transpose() - self.b.tr_matmul(x))
    }

    /// Eigenvalues of `alpha(z) = (A - B X) + z (D^T - B^T X)`.
    pub fn alpha_eigs(&self, x: &DenseMatrix) -> Result<Vec<Eig>> {
        let (p, q) = self.alpha_pencil(x);
        pencil_eigs(&p, &q)
    }

    /// The dual equation `Y^T D + A Y - B + Y^T C Y = 0`, written in the
    /// primal form with `A' = D, B' = -C, C' = -B, D' = A`.
    pub fn dual(&self) -> TRiccatiProblem {
        TRiccatiProblem { a: self.d.clone(), b: -&self.c, c: -&self.b, d: self.a.clone() }
    }

    /// Residual matrix of the dual equation.
    pub fn dual_residual_matrix(&self, y: &DenseMatrix) -> DenseMatrix {
        y.tr_matmul(&self.d) + &self.a * y - &self.b + y.tr_matmul(&self.c) * y
    }

    /// `(D + C Y, A^T + C^T Y)`, the coefficients of `beta(z)`.
    pub fn beta_pencil(&self, y: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
        (&self.d + &(&self.c * y), self.a.transpose() + self.c.tr_matmul(y))
    }

    /// Reads `A.txt`, `B.txt`, `C.txt`, `D.txt` from a directory.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let rd = |name: &str| io::read_text::<f64>(dir.join(format!("{name}.txt")));
        Self::new(rd("A")?, rd("B")?, rd("C")?, rd("D")?)
    }

    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c), ("D", &self.d)] {
            io::write_text(dir.join(format!("{name}.txt")), m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_solution_flags_absolute() {
        let z = DenseMatrix::zeros(2, 2);
        let p = TRiccatiProblem::new(DenseMatrix::identity(2), z.clone(), z.clone(), DenseMatrix::identity(2)).unwrap();
        let r = p.residual(&z);
        assert!(r.absolute);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn scalar_root_residual() {
        // -b x^2 + (a + d) x + c = 0 with a = d = b = 1: x^2 - 2x - c = 0.
        let c = 0.75;
        let p = TRiccatiProblem::scalar(1.0, 1.0, c, 1.0).unwrap();
        let x = 1.0 + (1.0 + c).sqrt();
        let r = p.residual(&DenseMatrix::from_rows(&[&[x]]));
        assert!(!r.absolute && r.value < 1e-14);
    }

    #[test]
    fn linearization_layout() {
        let p = TRiccatiProblem::scalar(2.0, 3.0, 5.0, 7.0).unwrap();
        let m = p.build_linearization().m;
        assert_eq!(m, DenseMatrix::from_rows(&[&[5.0, 7.0], &[2.0, -3.0]]));
    }

    #[test]
    fn rejects_bad_shapes() {
        let i2 = DenseMatrix::identity(2);
        assert!(TRiccatiProblem::new(i2.clone(), i2.clone(), DenseMatrix::identity(3), i2).is_err());
    }

    #[test]
    fn directory_roundtrip() {
        let dir = std::env::temp_dir().join(format!("tnare-problem-{}", std::process::id()));
        let p = TRiccatiProblem::scalar(0.1, 0.2, -0.3, 0.4).unwrap();
        p.save_dir(&dir).unwrap();
        assert_eq!(TRiccatiProblem::load_dir(&dir).unwrap(), p);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn dual_roundtrip() {
        let p = TRiccatiProblem::scalar(0.1, 0.2, -0.3, 0.4).unwrap();
        assert_eq!(p.dual().dual(), p);
        let y = DenseMatrix::from_rows(&[&[0.7]]);
        // The dual equation in primal form has the same residual up to sign.
        let r1 = p.dual_residual_matrix(&y)[(0, 0)];
        let r2 = p.dual().residual_matrix(&y)[(0, 0)];
        assert!((r1 + r2).abs() < 1e-15 || (r1 - r2).abs() < 1e-15);
    }
}
