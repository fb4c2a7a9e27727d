//! Dense solvers for the nonsymmetric algebraic T-Riccati equation
//! `D X + X^T A - X^T B X + C = 0`.

pub mod error;
pub mod gallery;
pub mod io;
pub mod lu;
pub mod matrix;
pub mod multiprec;
pub mod palindromic;
pub mod qr;
pub mod qz;
pub mod riccati;
pub mod scalar;
pub mod svd;
pub mod tsylvester;

pub use error::{Result, TnareError};
pub use matrix::{CMatrix, DenseMatrix, Mat};
pub use palindromic::{AntiTriangularForm, Region};
pub use qz::{Eig, EigenSelector, GeneralizedSchur};
pub use riccati::{DualSolveReport, Method, SolveReport, SolverOptions, SylvesterRoute, TRiccatiProblem};
pub use scalar::{Scalar, C64};
