//! Dense complex linear algebra for the small matrices used throughout the
//! crate: 7×7 Lax and Riemann–Hilbert objects and the 2N×2N Gram matrix of
//! the soliton construction.
//!
//! Storage is row-major. Nothing here is tuned for large matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Shorthand for the complex scalar used everywhere in the crate.
pub type C64 = Complex64;

/// Relative pivot modulus below which a matrix is treated as singular.
pub const SINGULAR_PIVOT_RTOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("{op}: dimension mismatch ({}×{} vs {}×{})", .left.0, .left.1, .right.0, .right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry count {len} does not match {rows}×{cols}")]
    BadLength { rows: usize, cols: usize, len: usize },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular to working precision at pivot {pivot} (|pivot| = {modulus:e})")]
    Singular { pivot: usize, modulus: f64 },
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, AlgebraError> {
        if rows == 0 || cols == 0 {
            return Err(AlgebraError::Empty);
        }
        if data.len() != rows * cols {
            return Err(AlgebraError::BadLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|z| !z.is_finite()) {
            return Err(AlgebraError::NonFinite {
                row: i / cols,
                col: i % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Outer product `col · row` of a column vector and a row vector.
    pub fn outer(col: &[C64], row: &[C64]) -> Self {
        Self::from_fn(col.len(), row.len(), |r, c| col[r] * row[c])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Checked matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>, AlgebraError> {
        if self.cols != v.len() {
            return Err(AlgebraError::DimensionMismatch {
                op: "mul_vec",
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Hermitian adjoint.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self·other − other·self`; panics on non-square or mismatched input.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}×{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on shape mismatch; they are for internal fixed-size work.

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// LU factorization `P·A = L·U` with partial pivoting (largest modulus in
/// the column). `L` has a unit diagonal and is stored below `U`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
    norm: f64,
}

impl LuFactors {
    pub fn factor(a: &ComplexMatrix) -> Result<Self, AlgebraError> {
        if !a.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: a.rows,
                cols: a.cols,
            });
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap_or(k);
            if p != k {
                for c in 0..n {
                    lu.data.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if pivot == C64::new(0.0, 0.0) {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for c in k + 1..n {
                    let u = lu[(k, c)];
                    lu[(i, c)] -= factor * u;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            swaps,
            norm: a.max_abs(),
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Pivot moduli `|U_kk|` in elimination order.
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.lu[(k, k)].norm()).collect()
    }

    pub fn det(&self) -> C64 {
        let prod: C64 = (0..self.dim()).map(|k| self.lu[(k, k)]).product();
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    /// Solves `A·X = B`. Fails if any pivot is below
    /// [`SINGULAR_PIVOT_RTOL`]` · ‖A‖_max`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix, AlgebraError> {
        let n = self.dim();
        if b.rows != n {
            return Err(AlgebraError::DimensionMismatch {
                op: "lu_solve",
                left: (n, n),
                right: (b.rows, b.cols),
            });
        }
        let threshold = SINGULAR_PIVOT_RTOL * self.norm;
        for (k, m) in self.pivots().into_iter().enumerate() {
            if m <= threshold || m == 0.0 {
                return Err(AlgebraError::Singular {
                    pivot: k,
                    modulus: m,
                });
            }
        }
        let m = b.cols;
        let mut x = ComplexMatrix::from_fn(n, m, |r, c| b[(self.perm[r], c)]);
        for c in 0..m {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix, AlgebraError> {
        self.solve(&ComplexMatrix::identity(self.dim()))
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, AlgebraError> {
    a.matmul(b)
}

pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, AlgebraError> {
    LuFactors::factor(a)?.solve(b)
}

/// Determinant from the pivoted LU factors. Singular input yields ≈ 0.
pub fn det(a: &ComplexMatrix) -> Result<C64, AlgebraError> {
    Ok(LuFactors::factor(a)?.det())
}

/// Pivot moduli from Gaussian elimination with complete pivoting, in
/// elimination order (non-increasing up to rounding). Used as a cheap
/// rank-revealing profile.
pub fn rank_profile(a: &ComplexMatrix) -> Result<Vec<f64>, AlgebraError> {
    if !a.is_square() {
        return Err(AlgebraError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, -1.0);
        for r in k..n {
            for c in k..n {
                let v = m[(r, c)].norm();
                if v > best {
                    (pr, pc, best) = (r, c, v);
                }
            }
        }
        for c in 0..n {
            m.data.swap(k * n + c, pr * n + c);
        }
        for r in 0..n {
            m.data.swap(r * n + k, r * n + pc);
        }
        out.push(best);
        let pivot = m[(k, k)];
        if best == 0.0 {
            continue;
        }
        for r in k + 1..n {
            let f = m[(r, k)] / pivot;
            for c in k..n {
                let u = m[(k, c)];
                m[(r, c)] -= f * u;
            }
        }
    }
    Ok(out)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Bilinear row·column product `Σ row_i col_i` (no conjugation).
pub fn dot(row: &[C64], col: &[C64]) -> C64 {
    row.iter().zip(col).map(|(a, b)| a * b).sum()
}
