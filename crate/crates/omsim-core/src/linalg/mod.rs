//! Minimal dense linear algebra for small matrices.
//!
//! Everything in the pipeline is tiny (drift matrices up to ~24×24, the
//! vectorized Lyapunov system up to ~576 unknowns), so a plain row-major
//! matrix with partial-pivot LU and a QR eigenvalue iteration is all that is
//! needed. No BLAS, no external solver.

mod eigen;

pub use eigen::eigenvalues;

use crate::math;
use crate::{CoreError, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Build from row-major data.
    pub fn from_rows(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        Mat { rows, cols, data: data.to_vec() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        // Scaled accumulation to dodge overflow on rad/s-sized entries.
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for &v in &self.data {
            let r = v / m;
            acc += r * r;
        }
        m * math::sqrt(acc)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, &v| acc.max(math::abs(v)))
    }

    /// Replace the matrix by its symmetric part `(M + Mᵀ)/2`.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let s = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = s;
                self[(j, i)] = s;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Extract the square submatrix with the given row/column indices.
    pub fn submatrix(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// Solve `self · x = b` by partial-pivot LU. `self` is left untouched.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert!(self.is_square());
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut x = b.to_vec();
        let mut piv: Vec<usize> = (0..n).collect();

        for col in 0..n {
            let mut pmax = 0.0;
            let mut prow = col;
            for r in col..n {
                let v = math::abs(lu[r * n + col]);
                if v > pmax {
                    pmax = v;
                    prow = r;
                }
            }
            if pmax == 0.0 {
                return Err(CoreError::SingularSystem { context: "LU pivot is zero" });
            }
            if prow != col {
                for c in 0..n {
                    lu.swap(prow * n + c, col * n + c);
                }
                x.swap(prow, col);
                piv.swap(prow, col);
            }
            let d = lu[col * n + col];
            for r in (col + 1)..n {
                let f = lu[r * n + col] / d;
                if f == 0.0 {
                    continue;
                }
                lu[r * n + col] = f;
                for c in (col + 1)..n {
                    lu[r * n + c] -= f * lu[col * n + c];
                }
                x[r] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            x[col] /= lu[col * n + col];
            for r in 0..col {
                x[r] -= lu[r * n + col] * x[col];
            }
        }
        Ok(x)
    }

    /// Determinant by partial-pivot LU.
    pub fn det(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pmax = 0.0;
            let mut prow = col;
            for r in col..n {
                let v = math::abs(lu[r * n + col]);
                if v > pmax {
                    pmax = v;
                    prow = r;
                }
            }
            if pmax == 0.0 {
                return 0.0;
            }
            if prow != col {
                for c in 0..n {
                    lu.swap(prow * n + c, col * n + c);
                }
                det = -det;
            }
            let d = lu[col * n + col];
            det *= d;
            for r in (col + 1)..n {
                let f = lu[r * n + col] / d;
                for c in (col + 1)..n {
                    lu[r * n + c] -= f * lu[col * n + c];
                }
            }
        }
        det
    }

    /// `|det(self − λI)|` for a complex shift; used to validate eigenvalues.
    pub fn char_residual(&self, lambda: Complex64) -> f64 {
        let n = self.rows;
        let mut m: Vec<Complex64> =
            self.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for i in 0..n {
            m[i * n + i] -= lambda;
        }
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pmax = 0.0;
            let mut prow = col;
            for r in col..n {
                let v = m[r * n + col].norm_sqr();
                if v > pmax {
                    pmax = v;
                    prow = r;
                }
            }
            if pmax == 0.0 {
                return 0.0;
            }
            if prow != col {
                for c in 0..n {
                    m.swap(prow * n + c, col * n + c);
                }
                det = -det;
            }
            let d = m[col * n + col];
            det *= d;
            for r in (col + 1)..n {
                let f = m[r * n + col] / d;
                for c in (col + 1)..n {
                    let sub = f * m[col * n + c];
                    m[r * n + c] -= sub;
                }
            }
        }
        math::hypot(det.re, det.im)
    }
}

impl core::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve a complex dense system `A z = b` through its 2n×2n real embedding.
///
/// Sizes here are a handful of cavities, so the 4× arithmetic overhead of the
/// embedding is irrelevant.
pub fn solve_complex(a: &[Complex64], n: usize, b: &[Complex64]) -> Result<Vec<Complex64>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut real = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[i * n + j];
            real[(i, j)] = z.re;
            real[(i, j + n)] = -z.im;
            real[(i + n, j)] = z.im;
            real[(i + n, j + n)] = z.re;
        }
    }
    let mut rhs = vec![0.0; 2 * n];
    for i in 0..n {
        rhs[i] = b[i].re;
        rhs[i + n] = b[i].im;
    }
    let x = real.solve(&rhs).map_err(|_| CoreError::SingularSystem {
        context: "complex steady-state system",
    })?;
    Ok((0..n).map(|i| Complex64::new(x[i], x[i + n])).collect())
}
