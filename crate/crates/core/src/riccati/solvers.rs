use std::time::Instant;

use super::problem::TRiccatiProblem;
use super::report::{relative_distance, Diagnostic, DualSolveReport, Method, SolveReport};
use super::verify::beta_identity_defect;
use crate::error::{Result, TnareError};
use crate::lu::Lu;
use crate::matrix::{CMatrix, DenseMatrix};
use crate::palindromic::{anti_triangular_schur, graph_from_basis, pqz_reorder, Region, DEFAULT_UNIT_BAND};
use crate::qz::{qz_decompose, reorder_schur, EigenSelector};
use crate::tsylvester::{tsylvester_kron, TSylvester};

/// How the T-Sylvester systems of Newton and the fixed point are solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SylvesterRoute {
    /// QZ-based triangular solve, `O(n^3)`.
    Schur,
    /// Dense LU of the `n^2 x n^2` Kronecker matrix.
    Kronecker,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub maxit: usize,
    /// Half-width of the ambiguity band around the unit circle.
    pub unit_band: f64,
    pub sylvester: SylvesterRoute,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-12, maxit: 100, unit_band: DEFAULT_UNIT_BAND, sylvester: SylvesterRoute::Schur }
    }
}

impl SolverOptions {
    /// Defaults for Newton: `tol = 1e-12`, `maxit = 50`.
    pub fn newton() -> Self {
        SolverOptions { maxit: 50, ..Self::default() }
    }
}

/// Real part of a subspace solution of a real problem, with the relative
/// size of the discarded imaginary part. Rounding can push a real
/// reciprocal pair near the unit circle off the real axis, which leaves a
/// small imaginary component; a complex part as large as the real part
/// means no real solution is associated with the selected half.
fn realify(x: &CMatrix) -> Result<(DenseMatrix, f64)> {
    let im = x.imag_part().frobenius_norm();
    let re = x.real_part();
    let rn = re.frobenius_norm();
    if im >= rn && im > 0.0 {
        return Err(TnareError::ComplexSolution(im));
    }
    Ok((re, if rn == 0.0 { im } else { im / rn }))
}

pub(crate) fn make_report(
    p: &TRiccatiProblem,
    method: Method,
    x: DenseMatrix,
    iterations: usize,
    history: Vec<Diagnostic>,
    start: Instant,
) -> Result<SolveReport> {
    let x = x.ensure_finite("solution")?;
    let res = p.residual(&x);
    let alpha_eigs = p.alpha_eigs(&x)?;
    Ok(SolveReport {
        method,
        x,
        relative_residual: res.value,
        residual_is_absolute: res.absolute,
        alpha_eigs,
        iterations,
        history,
        discarded_imaginary: 0.0,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

fn selector(region: Region) -> EigenSelector {
    match region {
        Region::Inside => EigenSelector::InsideUnitDisk,
        Region::Outside => EigenSelector::OutsideUnitDisk,
    }
}

/// Ordered QZ on `M + z M^T`, `X = Z_21 Z_11^{-1}`.
pub fn solve_qz(p: &TRiccatiProblem, region: Region, opts: &SolverOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let n = p.n();
    let m = p.build_linearization().m;
    let gs = qz_decompose(&m, &m.transpose())?;
    if let Some(e) = gs.eigs.iter().find(|e| e.near_unit_circle(opts.unit_band)) {
        return Err(TnareError::UnitCircleEigenvalue { modulus: e.modulus(), delta: opts.unit_band });
    }
    let sel = selector(region);
    let selected = sel.flags(&gs.eigs).iter().filter(|&&f| f).count();
    if selected != n {
        return Err(TnareError::UnbalancedSplit { selected, n });
    }
    let gs = reorder_schur(gs, &sel);
    let z11 = gs.z.submatrix(0, 0, n, n);
    let z21 = gs.z.submatrix(n, 0, n, n);
    let (x, imag) = realify(&graph_from_basis(&z11, &z21)?)?;
    let mut rep = make_report(p, Method::Qz, x, 0, Vec::new(), start)?;
    rep.discarded_imaginary = imag;
    Ok(rep)
}

/// Anti-triangular Schur form of `M`, optionally reordered so that the
/// leading half of the spectrum lies in `region`; `X = U_21 U_11^{-1}`.
///
/// Without reordering the leading half holds the smaller-modulus member of
/// every reciprocal pair.
pub fn solve_pqz(p: &TRiccatiProblem, region: Option<Region>, opts: &SolverOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let m = p.build_linearization().m;
    let mut atf = anti_triangular_schur(&m)?;
    if let Some(r) = region {
        atf = pqz_reorder(&atf, &m, r, opts.unit_band)?;
    }
    let (x, imag) = realify(&atf.graph_solution()?)?;
    let mut rep = make_report(p, Method::Pqz, x, 0, Vec::new(), start)?;
    rep.discarded_imaginary = imag;
    Ok(rep)
}

/// Doubling iterates `(E, F, G, P)`.
#[derive(Debug, Clone)]
pub struct DoublingState {
    pub e: DenseMatrix,
    pub f: DenseMatrix,
    pub g: DenseMatrix,
    pub p: DenseMatrix,
}

impl DoublingState {
    /// `N + z K = S^{-1} (M + z M^T)` with `S = [[C^T, D], [D^T, -B]]`.
    pub fn initial(p: &TRiccatiProblem) -> Result<Self> {
        let n = p.n();
        let s = DenseMatrix::block2x2(&p.c.transpose(), &p.d, &p.d.transpose(), &(-&p.b));
        let lu = Lu::factor(&s).map_err(|_| TnareError::SingularS)?;
        // S [E0; -P0] = [C; A], S [-G0; F0] = [A^T; -B^T]
        let top = lu.solve(&DenseMatrix::vstack(&p.c, &p.a))?;
        let bot = lu.solve(&DenseMatrix::vstack(&p.a.transpose(), &(-p.b.transpose())))?;
        Ok(DoublingState {
            e: top.submatrix(0, 0, n, n),
            p: -top.submatrix(n, 0, n, n),
            g: -bot.submatrix(0, 0, n, n),
            f: bot.submatrix(n, 0, n, n),
        })
    }

    /// One doubling step; `iter` labels a breakdown.
    pub fn step(&self, iter: usize) -> Result<Self> {
        let n = self.e.rows();
        let id = DenseMatrix::identity(n);
        let igp = Lu::factor(&(&id - &(&self.g * &self.p))).map_err(|_| TnareError::IterationBreakdown(iter))?;
        let ipg = Lu::factor(&(&id - &(&self.p * &self.g))).map_err(|_| TnareError::IterationBreakdown(iter))?;
        let t = igp.solve(&DenseMatrix::hstack(&self.e, &self.g))?;
        let (t_e, t_g) = (t.submatrix(0, 0, n, n), t.submatrix(0, n, n, n));
        let u = ipg.solve(&DenseMatrix::hstack(&self.f, &self.p))?;
        let (u_f, u_p) = (u.submatrix(0, 0, n, n), u.submatrix(0, n, n, n));
        let next = DoublingState {
            e: &self.e * &t_e,
            f: &self.f * &u_f,
            g: &self.g + &(&self.e * &t_g * &self.f),
            p: &self.p + &(&self.f * &u_p * &self.e),
        };
        if !(next.e.is_finite() && next.f.is_finite() && next.g.is_finite() && next.p.is_finite()) {
            return Err(TnareError::NonFinite("doubling iterate"));
        }
        Ok(next)
    }
}

/// Doubling algorithm; stops when `min(||E||_inf, ||F||_inf) <= tol`.
/// Returns `X = P_l` and the dual solution `Y = G_l`.
pub fn solve_da(p: &TRiccatiProblem, opts: &SolverOptions) -> Result<(SolveReport, DualSolveReport)> {
    let start = Instant::now();
    let mut st = DoublingState::initial(p)?;
    let mut history = Vec::new();
    let mut iters = 0;
    loop {
        let (e_inf, f_inf) = (st.e.infinity_norm(), st.f.infinity_norm());
        history.push(Diagnostic::Doubling { e_inf, f_inf });
        if e_inf.min(f_inf) <= opts.tol {
            break;
        }
        if iters == opts.maxit {
            return Err(TnareError::MaxIterations { maxit: opts.maxit, last: e_inf.min(f_inf) });
        }
        iters += 1;
        st = st.step(iters)?;
    }
    let dual = dual_report(p, st.g.clone())?;
    let rep = make_report(p, Method::Da, st.p, iters, history, start)?;
    Ok((rep, dual))
}

pub(crate) fn dual_report(p: &TRiccatiProblem, y: DenseMatrix) -> Result<DualSolveReport> {
    let r = p.dual_residual_matrix(&y).frobenius_norm();
    let yn = y.frobenius_norm();
    let (bp, bq) = p.beta_pencil(&y);
    let beta_eigs = crate::qz::pencil_eigs(&bp, &bq)?;
    let identity_defect = beta_identity_defect(p, &y);
    Ok(DualSolveReport { relative_residual: if yn == 0.0 { r } else { r / yn }, beta_eigs, identity_defect, y })
}

fn tsylvester_with(route: SylvesterRoute, p: &DenseMatrix, q: &DenseMatrix, f: &DenseMatrix) -> Result<DenseMatrix> {
    match route {
        SylvesterRoute::Schur => TSylvester::new(p, q)?.solve(f),
        SylvesterRoute::Kronecker => tsylvester_kron(p, q, f),
    }
}

/// Newton's method: each step solves
/// `(D - X^T B) H + H^T (A - B X) = -R(X)` and sets `X <- X + H`.
///
/// Stops when the relative step `||H||_F / ||X||_F` or the relative residual
/// of the new iterate drops below `tol`.
pub fn solve_newton(p: &TRiccatiProblem, x0: &DenseMatrix, opts: &SolverOptions) -> Result<SolveReport> {
    let start = Instant::now();
    if x0.shape() != (p.n(), p.n()) {
        return Err(TnareError::ShapeMismatch("Newton initial guess".into()));
    }
    let mut x = x0.clone();
    let mut history = Vec::new();
    for k in 1..=opts.maxit {
        let r = p.residual_matrix(&x);
        let lhs = &p.d - &x.tr_matmul(&p.b);
        let rhs = &p.a - &(&p.b * &x);
        let h = tsylvester_with(opts.sylvester, &lhs, &rhs, &(-&r)).map_err(|e| match e {
            TnareError::SingularMatrix { .. } => TnareError::SingularJacobian(k),
            other => other,
        })?;
        x = &x + &h;
        let xn = x.frobenius_norm();
        let step = if xn == 0.0 { h.frobenius_norm() } else { h.frobenius_norm() / xn };
        let res = p.residual(&x).value;
        history.push(Diagnostic::Step { step, residual: res });
        if !x.is_finite() {
            return Err(TnareError::NonFinite("Newton iterate"));
        }
        if step <= opts.tol || res <= opts.tol {
            return make_report(p, Method::Newton, x, k, history, start);
        }
    }
    let last = history.last().map_or(f64::INFINITY, |d| match d {
        Diagnostic::Step { step, .. } => *step,
        Diagnostic::Doubling { .. } => f64::INFINITY,
    });
    Err(TnareError::MaxIterations { maxit: opts.maxit, last })
}

/// Iterates `D X_{l+1} + X_{l+1}^T A = X_l^T B X_l - C` from `X_0 = 0`,
/// yielding `X_1, X_2, ...`.
pub struct FixedPointIter<'a> {
    problem: &'a TRiccatiProblem,
    solver: Option<TSylvester>,
    route: SylvesterRoute,
    x: DenseMatrix,
    failed: bool,
}

impl<'a> FixedPointIter<'a> {
    pub fn new(problem: &'a TRiccatiProblem, route: SylvesterRoute) -> Result<Self> {
        let solver = match route {
            SylvesterRoute::Schur => Some(TSylvester::new(&problem.d, &problem.a).map_err(|_| TnareError::SingularW)?),
            SylvesterRoute::Kronecker => None,
        };
        let n = problem.n();
        Ok(FixedPointIter { problem, solver, route, x: DenseMatrix::zeros(n, n), failed: false })
    }
}

impl Iterator for FixedPointIter<'_> {
    type Item = Result<DenseMatrix>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let p = self.problem;
        let rhs = &(self.x.tr_matmul(&p.b) * &self.x) - &p.c;
        let next = match (&self.solver, self.route) {
            (Some(s), _) => s.solve(&rhs),
            (None, _) => tsylvester_kron(&p.d, &p.a, &rhs),
        };
        match next.and_then(|x| x.ensure_finite("fixed-point iterate")) {
            Ok(x) => {
                self.x = x.clone();
                Some(Ok(x))
            }
            Err(e) => {
                self.failed = true;
                Some(Err(match e {
                    TnareError::SingularMatrix { .. } => TnareError::SingularW,
                    other => other,
                }))
            }
        }
    }
}

/// Fixed-point iteration; stops when `||X_{l+1} - X_l||_F / ||X_{l+1}||_F <= tol`.
pub fn solve_fixed_point(p: &TRiccatiProblem, opts: &SolverOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let mut prev = DenseMatrix::zeros(p.n(), p.n());
    let mut history = Vec::new();
    for (k, x) in FixedPointIter::new(p, opts.sylvester)?.enumerate().take(opts.maxit) {
        let x = x?;
        let step = relative_distance(&prev, &x);
        history.push(Diagnostic::Step { step, residual: p.residual(&x).value });
        if step <= opts.tol {
            return make_report(p, Method::FixedPoint, x, k + 1, history, start);
        }
        prev = x;
    }
    Err(TnareError::MaxIterations { maxit: opts.maxit, last: history.last().map_or(f64::INFINITY, |d| match d {
        Diagnostic::Step { step, .. } => *step,
        Diagnostic::Doubling { .. } => f64::INFINITY,
    }) })
}

/// Dispatches a primal solver by tag with its default configuration
/// (`region = Inside` for the subspace methods, `X_0 = 0` for Newton).
pub fn solve_with(p: &TRiccatiProblem, method: Method, opts: &SolverOptions) -> Result<SolveReport> {
    match method {
        Method::Qz => solve_qz(p, Region::Inside, opts),
        Method::Da => solve_da(p, opts).map(|(r, _)| r),
        Method::Pqz => solve_pqz(p, Some(Region::Inside), opts),
        Method::Newton => solve_newton(p, &DenseMatrix::zeros(p.n(), p.n()), opts),
        Method::FixedPoint => solve_fixed_point(p, opts),
    }
}

/// Solves the dual equation `Y^T D + A Y - B + Y^T C Y = 0` by running
/// `method` on the swapped problem (`A <-> D`, `B <-> -C`).
///
/// With the subspace methods the outside region is used, which matches the
/// `G`-limit of the doubling algorithm on the primal problem.
pub fn solve_dual(p: &TRiccatiProblem, method: Method, opts: &SolverOptions) -> Result<DualSolveReport> {
    let dual = p.dual();
    let y = match method {
        Method::Qz => solve_qz(&dual, Region::Outside, opts)?.x,
        Method::Pqz => solve_pqz(&dual, Some(Region::Outside), opts)?.x,
        Method::Da => solve_da(p, opts)?.1.y,
        Method::Newton => solve_newton(&dual, &DenseMatrix::zeros(p.n(), p.n()), opts)?.x,
        Method::FixedPoint => solve_fixed_point(&dual, opts)?.x,
    };
    dual_report(p, y)
}
