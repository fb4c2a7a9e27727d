use thiserror::Error;

/// Every failure mode reported by the solver suite.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TnareError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("matrix is numerically singular (pivot {pivot:.3e} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },
    #[error("QZ iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("degenerate pencil: both diagonal entries vanish at position {0}")]
    DegeneratePencil(usize),
    #[error("eigenvalue {modulus:.12} lies within {delta:.1e} of the unit circle")]
    UnitCircleEigenvalue { modulus: f64, delta: f64 },
    #[error("{selected} eigenvalues selected for an n = {n} subspace")]
    UnbalancedSplit { selected: usize, n: usize },
    #[error("pencil M + zM^T appears to be singular")]
    NearSingularPencil,
    #[error("irregular pencil: anti-diagonal pair {0} vanishes")]
    IrregularPencil(usize),
    #[error("reordering system is singular ({0})")]
    ReorderSingular(String),
    #[error("eigenvalue of modulus {modulus:.12} is ambiguous with band {delta:.1e}")]
    UnitCircleAmbiguity { modulus: f64, delta: f64 },
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("leading block of the subspace basis is singular (sigma_min {sigma_min:.3e})")]
    GraphConditionFailed { sigma_min: f64 },
    #[error("matrix S = [C^T D; D^T -B] is singular")]
    SingularS,
    #[error("doubling breakdown at iteration {0}")]
    IterationBreakdown(usize),
    #[error("no convergence within {maxit} iterations (last measure {last:.3e})")]
    MaxIterations { maxit: usize, last: f64 },
    #[error("Newton Jacobian is singular at iteration {0}")]
    SingularJacobian(usize),
    #[error("Kronecker operator W is singular")]
    SingularW,
    #[error("both A - BX and D^T - B^T X are singular")]
    BothSidesSingular,
    #[error("I - XY is nearly singular (sigma_min {0:.3e})")]
    NearSingularCoupling(f64),
    #[error("{0} is not a perfect square")]
    NotASquare(usize),
    #[error("computed solution has a non-negligible imaginary part ({0:.3e})")]
    ComplexSolution(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for TnareError {
    fn from(e: std::io::Error) -> Self {
        TnareError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TnareError>;
