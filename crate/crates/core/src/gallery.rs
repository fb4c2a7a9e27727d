//! Test problems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TnareError};
use crate::matrix::DenseMatrix;
use crate::riccati::TRiccatiProblem;

fn upper_bidiagonal(n: usize, diag: f64, sup: f64) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag
        } else if j == i + 1 {
            sup
        } else {
            0.0
        }
    })
}

/// Bidiagonal test problem with a nonnegative minimal solution.
pub fn gen_example1(n: usize) -> Result<TRiccatiProblem> {
    if n < 2 {
        return Err(TnareError::InvalidConfig("n must be at least 2".into()));
    }
    let a = upper_bidiagonal(n, -1.0, -1.0);
    let d = upper_bidiagonal(n, 4.0, -1.0);
    let mut e = a.clone();
    e[(n - 1, n - 1)] = -0.9;
    let b = a.scale(-1.0 / a.frobenius_norm());
    let c = e.scale(1.0 / e.frobenius_norm());
    TRiccatiProblem::new(a, b, c, d)
}

/// Centered-difference `-Laplace + cx d/dx + cy d/dy` on an `m x m` interior
/// grid of the unit square, `h = 1/(m+1)`, Dirichlet boundary. Unknowns are
/// ordered with `x` fastest.
pub fn convection_diffusion(m: usize, cx: f64, cy: f64) -> DenseMatrix {
    let n = m * m;
    let h = 1.0 / (m as f64 + 1.0);
    let (diag, off) = (4.0 / (h * h), -1.0 / (h * h));
    let (tx, ty) = (cx / (2.0 * h), cy / (2.0 * h));
    let mut a = DenseMatrix::zeros(n, n);
    for j in 0..m {
        for i in 0..m {
            let k = i + m * j;
            a[(k, k)] = diag;
            if i > 0 {
                a[(k, k - 1)] = off - tx;
            }
            if i + 1 < m {
                a[(k, k + 1)] = off + tx;
            }
            if j > 0 {
                a[(k, k - m)] = off - ty;
            }
            if j + 1 < m {
                a[(k, k + m)] = off + ty;
            }
        }
    }
    a
}

/// Discretized convection-diffusion problem with random dense coupling:
/// `A = -disc(-Laplace + 10 d/dx) / 2`, `D = disc(-Laplace + 5 d/dy)`,
/// `B ~ U(0, 0.1)`, `C ~ -U(0, 0.1)`.
pub fn gen_example2(n: usize, seed: u64) -> Result<TRiccatiProblem> {
    let m = (n as f64).sqrt().round() as usize;
    if n == 0 || m * m != n {
        return Err(TnareError::NotASquare(n));
    }
    let a = convection_diffusion(m, 10.0, 0.0).scale(-0.5);
    let d = convection_diffusion(m, 0.0, 5.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = DenseMatrix::from_fn(n, n, |_, _| rng.random_range(0.0..0.1));
    let c = DenseMatrix::from_fn(n, n, |_, _| -rng.random_range(0.0..0.1));
    TRiccatiProblem::new(a, b, c, d)
}

/// Fixed `2 x 2` problem with several reciprocal-free solutions.
pub fn gen_example3() -> TRiccatiProblem {
    TRiccatiProblem {
        a: DenseMatrix::from_rows(&[&[1.0, -0.2], &[-0.1, 2.0]]),
        b: DenseMatrix::from_rows(&[&[0.2, 0.1], &[0.3, 0.4]]),
        c: DenseMatrix::from_rows(&[&[-0.1, -0.1], &[-0.1, -0.1]]),
        d: DenseMatrix::from_rows(&[&[1.0, 0.0], &[-0.1, 2.0]]),
    }
}

/// Entry `(i, j)` (0-based) of the anti-triangular core of the
/// near-unit-circle problem.
///
/// The anti-diagonal carries `i + 1` and `1/(i + 1)`, the central pair
/// `1/(1 + sigma)` and `1 + sigma`. Entries above the anti-diagonal vanish
/// and every entry below it is `1/5`, so the core is anti-triangular.
pub(crate) enum CoreEntry {
    Zero,
    Fifth,
    Int(usize),
    InvInt(usize),
    OnePlusSigma,
    InvOnePlusSigma,
}

pub(crate) fn example4_core_entry(n: usize, i: usize, j: usize) -> CoreEntry {
    let p = 2 * n - 1;
    if i + j < p {
        CoreEntry::Zero
    } else if i + j == p {
        // 1-based row r = i + 1
        if i + 1 < n {
            CoreEntry::Int(i + 2)
        } else if i + 1 == n {
            CoreEntry::InvOnePlusSigma
        } else if i == n {
            CoreEntry::OnePlusSigma
        } else {
            CoreEntry::InvInt(j + 2)
        }
    } else {
        CoreEntry::Fifth
    }
}

/// `N` with ones on and above the diagonal and `-1` below.
pub(crate) fn example4_n(n2: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n2, n2, |i, j| if j >= i { 1.0 } else { -1.0 })
}

/// The `2n x 2n` core matrix in double precision.
pub fn example4_core(n: usize, sigma: f64) -> DenseMatrix {
    DenseMatrix::from_fn(2 * n, 2 * n, |i, j| match example4_core_entry(n, i, j) {
        CoreEntry::Zero => 0.0,
        CoreEntry::Fifth => 0.2,
        CoreEntry::Int(k) => k as f64,
        CoreEntry::InvInt(k) => 1.0 / k as f64,
        CoreEntry::OnePlusSigma => 1.0 + sigma,
        CoreEntry::InvOnePlusSigma => 1.0 / (1.0 + sigma),
    })
}

/// Splits `M = [[C, D], [A, -B]]` into a problem.
pub fn problem_from_linearization(m: &DenseMatrix) -> Result<TRiccatiProblem> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(TnareError::ShapeMismatch("linearization must be 2n x 2n".into()));
    }
    let n = m.rows() / 2;
    TRiccatiProblem::new(
        m.submatrix(n, 0, n, n),
        -m.submatrix(n, n, n, n),
        m.submatrix(0, 0, n, n),
        m.submatrix(0, n, n, n),
    )
}

/// Problem whose pencil has the eigenvalue pairs `-(1 + sigma)^{-2}`,
/// `-i^{-2}` (`i = 2..n`) and their reciprocals. `M = N M_core N^T` is
/// formed with extended precision and rounded once.
pub fn gen_example4(n: usize, sigma: f64) -> Result<TRiccatiProblem> {
    if n < 2 {
        return Err(TnareError::InvalidConfig("n must be at least 2".into()));
    }
    if !(sigma > 0.0) {
        return Err(TnareError::InvalidConfig("sigma must be positive".into()));
    }
    let m = crate::multiprec::example4_linearization(n, sigma, 256).to_f64();
    problem_from_linearization(&m)
}
