//! Minimal dense linear algebra and complex arithmetic.
//!
//! Trend bases have a handful of columns, so everything here is plain
//! row-major storage and textbook loops. Linear systems are always solved
//! through a Cholesky factorization; no inverse is ever formed.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used for evaluation points and every complex-valued result.
pub type ComplexScalar = Complex64;

/// Imaginary unit.
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Relative pivot threshold of the Cholesky factorization.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Relative tolerance of the symmetry check in [`solve_spd`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Dense row-major matrix of finite reals.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "ragged rows: expected {cols} columns, found {}",
                bad.len()
            )));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Single-column matrix.
    pub fn column(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for p in 0..self.cols {
                let a = self[(i, p)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(p, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `AᵀA` for the columns of `self`.
    pub fn gram(&self) -> Matrix {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..self.cols {
                for b in a..self.cols {
                    g[(a, b)] += r[a] * r[b];
                }
            }
        }
        for a in 0..self.cols {
            for b in 0..a {
                g[(a, b)] = g[(b, a)];
            }
        }
        g
    }

    /// Largest absolute entry.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        self.first_asymmetry(rel_tol).is_none()
    }

    fn first_asymmetry(&self, rel_tol: f64) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        let scale = self.norm_max().max(f64::MIN_POSITIVE);
        for i in 0..self.rows {
            for j in 0..i {
                if (self[(i, j)] - self[(j, i)]).abs() > rel_tol * scale {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    /// Factors a symmetric positive-definite matrix. Only the lower triangle
    /// of `a` is read.
    pub fn factor(a: &Matrix) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "cholesky needs a non-empty square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let max_diag = (0..n).fold(0.0_f64, |m, i| m.max(a[(i, i)].abs()));
        let threshold = PIVOT_TOLERANCE * max_diag;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)];
            for p in 0..j {
                d -= l[(j, p)] * l[(j, p)];
            }
            if d.is_nan() || d <= threshold {
                return Err(Error::NotPositiveDefinite { row: j, pivot: d });
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for p in 0..j {
                    s -= l[(i, p)] * l[(j, p)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    pub fn factor_matrix(&self) -> &Matrix {
        &self.l
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        debug_assert_eq!(b.len(), n);
        let l = &self.l;
        for i in 0..n {
            let mut s = b[i];
            for p in 0..i {
                s -= l[(i, p)] * b[p];
            }
            b[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for p in i + 1..n {
                s -= l[(p, i)] * b[p];
            }
            b[i] = s / l[(i, i)];
        }
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                found: b.len(),
            });
        }
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    /// Solves `A x = b` for a complex right-hand side. `A` is real, so the
    /// real and imaginary parts are independent real solves.
    pub fn solve_complex(&self, b: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        let re = self.solve_vec(&b.iter().map(|z| z.re).collect::<Vec<_>>())?;
        let im = self.solve_vec(&b.iter().map(|z| z.im).collect::<Vec<_>>())?;
        Ok(re
            .into_iter()
            .zip(im)
            .map(|(r, i)| ComplexScalar::new(r, i))
            .collect())
    }

    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        if b.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, factor is {}x{}",
                b.rows(),
                self.dim(),
                self.dim()
            )));
        }
        let mut x = Matrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let mut col = b.col(j);
            self.solve_in_place(&mut col);
            for (i, v) in col.into_iter().enumerate() {
                x[(i, j)] = v;
            }
        }
        Ok(x)
    }

    /// 1-norm condition number estimate `‖A‖₁‖A⁻¹‖₁`, computed exactly from
    /// the columns of the inverse. Intended for the small Gram matrices only.
    pub fn condition_1(&self, a: &Matrix) -> f64 {
        let inv = self
            .solve(&Matrix::identity(self.dim()))
            .expect("identity has matching dimension");
        a.norm_1() * inv.norm_1()
    }
}

/// Solves `A X = B` for symmetric positive-definite `A`.
pub fn solve_spd(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "solve_spd needs a non-empty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if let Some((row, col)) = a.first_asymmetry(SYMMETRY_TOLERANCE) {
        return Err(Error::NotSymmetric { row, col });
    }
    Cholesky::factor(a)?.solve(b)
}

/// Bilinear product `Σ aᵢbᵢ` with no conjugation.
pub fn bilinear_dot(a: &[ComplexScalar], b: &[ComplexScalar]) -> ComplexScalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Complex-by-real dot product `Σ aᵢvᵢ`.
pub fn dot_real(a: &[ComplexScalar], v: &[f64]) -> ComplexScalar {
    a.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// The two results obtained by taking `+σ` or `−σ` in the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugatePair {
    pub plus: ComplexScalar,
    pub minus: ComplexScalar,
}

impl ConjugatePair {
    pub fn new(plus: ComplexScalar, minus: ComplexScalar) -> Self {
        Self { plus, minus }
    }

    /// Pair whose minus branch is the conjugate of `plus`.
    pub fn from_plus(plus: ComplexScalar) -> Self {
        Self {
            plus,
            minus: plus.conj(),
        }
    }

    pub fn get(&self, branch: Branch) -> ComplexScalar {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }

    pub fn map(self, f: impl Fn(ComplexScalar) -> ComplexScalar) -> Self {
        Self {
            plus: f(self.plus),
            minus: f(self.minus),
        }
    }

    /// Whether `minus` is the exact conjugate of `plus`.
    pub fn is_conjugate(&self) -> bool {
        self.minus == self.plus.conj()
    }
}

/// Selects one side of a [`ConjugatePair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}
