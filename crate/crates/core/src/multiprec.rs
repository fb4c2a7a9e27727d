//! Extended-precision reference computations on `dashu-float` binary floats.

use std::fmt::Write as _;
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::{DBig, FBig};

use crate::error::{Result, TnareError};
use crate::gallery::{example4_core_entry, CoreEntry};
use crate::matrix::DenseMatrix;
use crate::riccati::TRiccatiProblem;

pub type Mp = FBig<HalfEven, 2>;

/// Bits needed for `digits` significant decimal digits, plus guard bits.
pub fn bits_for_digits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16
}

pub fn mp_from_f64(x: f64, prec: usize) -> Mp {
    Mp::try_from(x).expect("finite value").with_precision(prec).value()
}

pub fn mp_from_i64(x: i64, prec: usize) -> Mp {
    Mp::from(x).with_precision(prec).value()
}

/// Parses a decimal literal, rounding once to `prec` bits.
pub fn mp_parse(s: &str, prec: usize) -> Result<Mp> {
    let d = DBig::from_str(s.trim()).map_err(|e| TnareError::Parse(format!("`{s}`: {e:?}")))?;
    Ok(d.with_base_and_precision::<2>(prec).value().with_rounding::<HalfEven>())
}

fn mp_abs(x: &Mp) -> Mp {
    if *x < Mp::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Dense row-major matrix of extended-precision floats.
#[derive(Debug, Clone, PartialEq)]
pub struct MpMatrix {
    rows: usize,
    cols: usize,
    prec: usize,
    data: Vec<Mp>,
}

impl MpMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: usize) -> Self {
        MpMatrix { rows, cols, prec, data: vec![mp_from_i64(0, prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: usize) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.data[i * n + i] = mp_from_i64(1, prec);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, prec: usize, mut f: impl FnMut(usize, usize) -> Mp) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).with_precision(prec).value());
            }
        }
        MpMatrix { rows, cols, prec, data }
    }

    /// Exact lift of a double matrix.
    pub fn from_f64(m: &DenseMatrix, prec: usize) -> Self {
        Self::from_fn(m.rows(), m.cols(), prec, |i, j| mp_from_f64(m[(i, j)], prec))
    }

    pub fn to_f64(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64().value())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &Mp {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Mp) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.prec, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        MpMatrix { data: self.data.iter().map(|x| -x.clone()).collect(), ..self.clone() }
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&Mp, &Mp) -> Mp) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(TnareError::ShapeMismatch("mp elementwise operation".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(MpMatrix { data, ..self.clone() })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, self.prec, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(TnareError::ShapeMismatch("mp hstack".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, self.prec, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(TnareError::ShapeMismatch("mp vstack".into()));
        }
        Ok(Self::from_fn(self.rows + rhs.rows, self.cols, self.prec, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                rhs.get(i - self.rows, j).clone()
            }
        }))
    }

    /// Writes the matrix in the plain text format with `digits` significant
    /// decimal digits per entry.
    pub fn to_text(&self, digits: usize) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.get(i, j).to_decimal().value().with_precision(digits).value().to_string())
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    /// Parses the format written by [`MpMatrix::to_text`].
    pub fn from_text(text: &str, prec: usize) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| TnareError::Parse("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| TnareError::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(TnareError::Parse(format!("bad header `{header}`")));
        };
        let data: Vec<Mp> = lines.flat_map(str::split_whitespace).map(|t| mp_parse(t, prec)).collect::<Result<_>>()?;
        if data.len() != rows * cols {
            return Err(TnareError::Parse(format!("expected {} entries, found {}", rows * cols, data.len())));
        }
        Ok(MpMatrix { rows, cols, prec, data })
    }
}

pub fn mp_matmul(a: &MpMatrix, b: &MpMatrix) -> Result<MpMatrix> {
    if a.cols != b.rows {
        return Err(TnareError::ShapeMismatch("mp matmul".into()));
    }
    let prec = a.prec.max(b.prec);
    let mut out = MpMatrix::zeros(a.rows, b.cols, prec);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if *aik == Mp::ZERO {
                continue;
            }
            for j in 0..b.cols {
                let v = out.get(i, j) + aik * b.get(k, j);
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Infinity norm, rounded to double.
pub fn mp_norm(a: &MpMatrix) -> f64 {
    (0..a.rows)
        .map(|i| {
            let mut s = mp_from_i64(0, a.prec);
            for j in 0..a.cols {
                s += mp_abs(a.get(i, j));
            }
            s.to_f64().value()
        })
        .fold(0.0, f64::max)
}

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn mp_lu_solve(a: &MpMatrix, b: &MpMatrix) -> Result<MpMatrix> {
    let n = a.rows;
    if a.cols != n || b.rows != n {
        return Err(TnareError::ShapeMismatch("mp_lu_solve".into()));
    }
    let mut a = a.clone();
    let mut x = b.clone();
    let m = b.cols;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| mp_abs(a.get(i, k)).partial_cmp(&mp_abs(a.get(j, k))).unwrap())
            .unwrap();
        if *a.get(p, k) == Mp::ZERO {
            return Err(TnareError::SingularMatrix { step: k, pivot: 0.0 });
        }
        if p != k {
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
            }
            for j in 0..m {
                x.data.swap(k * m + j, p * m + j);
            }
        }
        let piv = a.get(k, k).clone();
        for i in k + 1..n {
            let l = a.get(i, k) / &piv;
            if l == Mp::ZERO {
                continue;
            }
            for j in k + 1..n {
                let v = a.get(i, j) - &l * a.get(k, j);
                a.set(i, j, v);
            }
            for j in 0..m {
                let v = x.get(i, j) - &l * x.get(k, j);
                x.set(i, j, v);
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..m {
            let mut s = x.get(k, j).clone();
            for c in k + 1..n {
                s -= a.get(k, c) * x.get(c, j);
            }
            x.set(k, j, s / a.get(k, k));
        }
    }
    Ok(x)
}

/// Problem coefficients in extended precision.
#[derive(Debug, Clone, PartialEq)]
pub struct MpProblem {
    pub a: MpMatrix,
    pub b: MpMatrix,
    pub c: MpMatrix,
    pub d: MpMatrix,
}

impl MpProblem {
    pub fn from_f64(p: &TRiccatiProblem, prec: usize) -> Self {
        MpProblem {
            a: MpMatrix::from_f64(&p.a, prec),
            b: MpMatrix::from_f64(&p.b, prec),
            c: MpMatrix::from_f64(&p.c, prec),
            d: MpMatrix::from_f64(&p.d, prec),
        }
    }

    /// Splits `M = [[C, D], [A, -B]]`.
    pub fn from_linearization(m: &MpMatrix) -> Self {
        let n = m.rows / 2;
        MpProblem {
            a: m.submatrix(n, 0, n, n),
            b: m.submatrix(n, n, n, n).neg(),
            c: m.submatrix(0, 0, n, n),
            d: m.submatrix(0, n, n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.a.rows
    }

    pub fn residual_matrix(&self, x: &MpMatrix) -> Result<MpMatrix> {
        let xt = x.transpose();
        let dx = mp_matmul(&self.d, x)?;
        let xa = mp_matmul(&xt, &self.a)?;
        let xbx = mp_matmul(&mp_matmul(&xt, &self.b)?, x)?;
        dx.add(&xa)?.sub(&xbx)?.add(&self.c)
    }
}

/// `M = N M_core N^T` of the near-unit-circle example, built at `prec` bits
/// from the exact double value of `sigma`.
pub fn example4_linearization(n: usize, sigma: f64, prec: usize) -> MpMatrix {
    let n2 = 2 * n;
    let one = mp_from_i64(1, prec);
    let ops = &one + mp_from_f64(sigma, prec);
    let core = MpMatrix::from_fn(n2, n2, prec, |i, j| match example4_core_entry(n, i, j) {
        CoreEntry::Zero => mp_from_i64(0, prec),
        CoreEntry::Fifth => mp_from_i64(1, prec) / mp_from_i64(5, prec),
        CoreEntry::Int(k) => mp_from_i64(k as i64, prec),
        CoreEntry::InvInt(k) => mp_from_i64(1, prec) / mp_from_i64(k as i64, prec),
        CoreEntry::OnePlusSigma => ops.clone(),
        CoreEntry::InvOnePlusSigma => &one / &ops,
    });
    let nm = MpMatrix::from_f64(&crate::gallery::example4_n(n2), prec);
    let t = mp_matmul(&nm, &core).expect("square");
    mp_matmul(&t, &nm.transpose()).expect("square")
}

/// Outcome of the extended-precision doubling algorithm.
#[derive(Debug, Clone)]
pub struct MpDaResult {
    pub x: MpMatrix,
    pub y: MpMatrix,
    pub iterations: usize,
    /// `min(||E||_inf, ||F||_inf)` at the stop.
    pub last: f64,
}

/// Doubling algorithm at the working precision of `p`; stops when
/// `min(||E||_inf, ||F||_inf) <= tol`.
pub fn mp_da_solve(p: &MpProblem, tol: f64, maxit: usize) -> Result<MpDaResult> {
    let n = p.n();
    let prec = p.a.prec;
    let s = p.c.transpose().hstack(&p.d)?.vstack(&p.d.transpose().hstack(&p.b.neg())?)?;
    let top = mp_lu_solve(&s, &p.c.vstack(&p.a)?).map_err(|_| TnareError::SingularS)?;
    let bot = mp_lu_solve(&s, &p.a.transpose().vstack(&p.b.transpose().neg())?).map_err(|_| TnareError::SingularS)?;
    let mut e = top.submatrix(0, 0, n, n);
    let mut pp = top.submatrix(n, 0, n, n).neg();
    let mut g = bot.submatrix(0, 0, n, n).neg();
    let mut f = bot.submatrix(n, 0, n, n);
    let id = MpMatrix::identity(n, prec);
    for it in 0..=maxit {
        let last = mp_norm(&e).min(mp_norm(&f));
        if last <= tol {
            return Ok(MpDaResult { x: pp, y: g, iterations: it, last });
        }
        if it == maxit {
            return Err(TnareError::MaxIterations { maxit, last });
        }
        let igp = id.sub(&mp_matmul(&g, &pp)?)?;
        let ipg = id.sub(&mp_matmul(&pp, &g)?)?;
        let t = mp_lu_solve(&igp, &e.hstack(&g)?).map_err(|_| TnareError::IterationBreakdown(it + 1))?;
        let u = mp_lu_solve(&ipg, &f.hstack(&pp)?).map_err(|_| TnareError::IterationBreakdown(it + 1))?;
        let (t_e, t_g) = (t.submatrix(0, 0, n, n), t.submatrix(0, n, n, n));
        let (u_f, u_p) = (u.submatrix(0, 0, n, n), u.submatrix(0, n, n, n));
        let g_new = g.add(&mp_matmul(&mp_matmul(&e, &t_g)?, &f)?)?;
        let p_new = pp.add(&mp_matmul(&mp_matmul(&f, &u_p)?, &e)?)?;
        e = mp_matmul(&e, &t_e)?;
        f = mp_matmul(&f, &u_f)?;
        g = g_new;
        pp = p_new;
    }
    unreachable!()
}
