//! Solvers and certificates for `D X + X^T A - X^T B X + C = 0`.

mod existence;
mod problem;
mod report;
mod solvers;
mod verify;

pub use existence::{check_existence_assumptions, find_uv, is_m_matrix, m_hat, ExistenceReport, W_EXPLICIT_MAX};
pub use problem::{PalindromicPencil, Residual, TRiccatiProblem};
pub use report::{relative_distance, Diagnostic, DualSolveReport, Method, SolveReport};
pub use solvers::{
    solve_da, solve_dual, solve_fixed_point, solve_newton, solve_pqz, solve_qz, solve_with, DoublingState,
    FixedPointIter, SolverOptions, SylvesterRoute,
};
pub use verify::{
    beta_identity_defect, block_diagonalize, default_sample_points, rho_w, verify_dare, verify_deflating_identity,
    BlockDiagonalization, DareForm,
};
