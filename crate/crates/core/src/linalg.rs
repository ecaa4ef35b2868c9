//! Small dense square matrices, just enough for group elements on `R x W`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::math::sqrt;

/// A dense, row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// The `n x n` zero matrix.
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// The `n x n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from rows; returns `None` unless the rows form a square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self { n, data: rows.iter().flatten().copied().collect() })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Side length.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Rows as owned vectors.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self * rhs`. Panics on size mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// Matrix-vector product. Panics on size mismatch.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, v.len(), "matrix/vector size mismatch");
        self.data.chunks(self.n).map(|row| crate::math::dot(row, v)).collect()
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        Self { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for i in col + 1..n {
                let f = a[i * n + col] / p;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[i * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }

    /// Copies the square sub-block with rows and columns `range`.
    pub fn block(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> Vec<Vec<f64>> {
        rows.map(|i| cols.clone().map(|j| self[(i, j)]).collect()).collect()
    }

    /// Writes `b` into the diagonal block starting at `offset`.
    pub fn set_block(&mut self, offset: usize, b: &Matrix) {
        for i in 0..b.n {
            for j in 0..b.n {
                self[(offset + i, offset + j)] = b[(i, j)];
            }
        }
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: f64) -> Matrix {
        Self { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Determinant of a matrix given as rows (used for sub-blocks).
pub fn det_rows(rows: &[Vec<f64>]) -> f64 {
    Matrix::from_rows(rows).map(|m| m.det()).unwrap_or(f64::NAN)
}
