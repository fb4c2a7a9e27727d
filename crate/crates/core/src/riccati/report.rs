use std::fmt;
use std::str::FromStr;

use crate::error::TnareError;
use crate::matrix::DenseMatrix;
use crate::qz::Eig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Qz,
    Da,
    Pqz,
    Newton,
    FixedPoint,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Qz, Method::Da, Method::Pqz, Method::Newton, Method::FixedPoint];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::Qz => "qz",
            Method::Da => "da",
            Method::Pqz => "pqz",
            Method::Newton => "newton",
            Method::FixedPoint => "fixedpoint",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = TnareError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| TnareError::InvalidConfig(format!("unknown solver `{s}`")))
    }
}

/// One entry of a solver's convergence history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diagnostic {
    /// `||E_l||_inf` and `||F_l||_inf` of a doubling iterate.
    Doubling { e_inf: f64, f_inf: f64 },
    /// Relative step `||X_{l+1} - X_l||_F / ||X_{l+1}||_F` and the relative
    /// residual of the new iterate.
    Step { step: f64, residual: f64 },
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub method: Method,
    pub x: DenseMatrix,
    pub relative_residual: f64,
    /// Set when `X = 0` and the residual is absolute.
    pub residual_is_absolute: bool,
    /// Eigenvalues of `alpha(z) = (A - B X) + z (D^T - B^T X)`.
    pub alpha_eigs: Vec<Eig>,
    pub iterations: usize,
    pub history: Vec<Diagnostic>,
    /// `||Im X||_F / ||Re X||_F` dropped by the subspace methods.
    pub discarded_imaginary: f64,
    pub elapsed: f64,
}

impl SolveReport {
    /// Flat `key=value` record.
    pub fn to_key_value(&self) -> String {
        let eigs: Vec<String> = self
            .alpha_eigs
            .iter()
            .map(|e| match e.lambda() {
                Some(l) => format!("{:e}{:+e}i", l.re, l.im),
                None => "inf".to_string(),
            })
            .collect();
        let x: Vec<String> = self.x.as_slice().iter().map(|v| format!("{v:e}")).collect();
        format!(
            "method={}\nn={}\nrelative_residual={:e}\nresidual_is_absolute={}\niterations={}\nelapsed={:e}\nalpha_eigs={}\nx={}\n",
            self.method,
            self.x.rows(),
            self.relative_residual,
            self.residual_is_absolute,
            self.iterations,
            self.elapsed,
            eigs.join(";"),
            x.join(";"),
        )
    }

    pub const CSV_HEADER: [&'static str; 5] = ["method", "n", "rel_residual", "iterations", "seconds"];

    pub fn csv_record(&self) -> [String; 5] {
        [
            self.method.to_string(),
            self.x.rows().to_string(),
            format!("{:e}", self.relative_residual),
            self.iterations.to_string(),
            format!("{:e}", self.elapsed),
        ]
    }

    pub fn max_alpha_modulus(&self) -> f64 {
        self.alpha_eigs.iter().map(Eig::modulus).fold(0.0, f64::max)
    }

    pub fn min_alpha_modulus(&self) -> f64 {
        self.alpha_eigs.iter().map(Eig::modulus).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct DualSolveReport {
    pub y: DenseMatrix,
    /// `||Y^T D + A Y - B + Y^T C Y||_F / ||Y||_F` (absolute when `Y = 0`).
    pub relative_residual: f64,
    /// Eigenvalues of `beta(z) = (D + C Y) + z (A^T + C^T Y)`.
    pub beta_eigs: Vec<Eig>,
    /// Defect of `phi(z) [Y; I] = [I; -Y^T] beta(z)`.
    pub identity_defect: f64,
}

pub fn relative_distance(x: &DenseMatrix, reference: &DenseMatrix) -> f64 {
    let d = (x - reference).frobenius_norm();
    let r = reference.frobenius_norm();
    if r == 0.0 {
        d
    } else {
        d / r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_tags_roundtrip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn key_value_record() {
        let r = SolveReport {
            method: Method::Da,
            x: DenseMatrix::from_rows(&[&[0.5]]),
            relative_residual: 1e-16,
            residual_is_absolute: false,
            alpha_eigs: vec![Eig::new(crate::scalar::C64::new(1.0, 0.0), crate::scalar::C64::new(-2.0, 0.0))],
            iterations: 3,
            history: vec![],
            discarded_imaginary: 0.0,
            elapsed: 0.0,
        };
        let kv = r.to_key_value();
        assert!(kv.contains("method=da\n"));
        assert!(kv.contains("iterations=3\n"));
        assert!(kv.contains("alpha_eigs=5e-1+0e0i"));
    }
}
