use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
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

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "vector length does not match");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Real symmetric matrix; every write goes to both triangles.
///
/// Both triangles are stored so that products and solvers can run over
/// contiguous rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    inner: DenseMatrix,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            inner: DenseMatrix::zeros(dim, dim),
        }
    }

    /// Accepts a square matrix whose triangles agree to `tol`, averaging them.
    pub fn from_dense(m: DenseMatrix, tol: f64) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Domain(format!(
                "{}x{} matrix is not square",
                m.rows, m.cols
            )));
        }
        if m.data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        if !m.is_symmetric(tol) {
            return Err(Error::Domain("matrix is not symmetric".into()));
        }
        let mut s = Self::zeros(m.rows);
        for i in 0..m.rows {
            for j in 0..=i {
                s.set(i, j, 0.5 * (m[(i, j)] + m[(j, i)]));
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        if i == j {
            self.inner[(i, i)] += v;
        } else {
            self.inner[(i, j)] += v;
            self.inner[(j, i)] += v;
        }
    }

    pub fn add(&self, other: &SymmetricMatrix) -> SymmetricMatrix {
        assert_eq!(self.dim(), other.dim());
        let mut out = self.clone();
        for (o, v) in out.inner.data.iter_mut().zip(&other.inner.data) {
            *o += v;
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        self.inner.matvec(v)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }
}

/// Real amplitudes of a state in some truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<f64>,
}

impl StateVector {
    pub fn new(amps: Vec<f64>) -> Self {
        StateVector { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector {
            amps: vec![0.0; dim],
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amps[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [f64] {
        &mut self.amps
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.amps
    }

    pub fn dot(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
        self
    }

    pub fn scaled(mut self, f: f64) -> Self {
        for a in &mut self.amps {
            *a *= f;
        }
        self
    }

    pub fn axpy(&mut self, f: f64, other: &StateVector) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += f * b;
        }
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_writes_mirror() {
        let mut s = SymmetricMatrix::zeros(3);
        s.set(2, 0, 1.5);
        s.add_to(1, 1, 2.0);
        s.add_to(0, 1, -1.0);
        assert_eq!(s.get(0, 2), 1.5);
        assert_eq!(s.get(1, 0), -1.0);
        assert!(s.as_dense().is_symmetric(0.0));
        assert_eq!(s.matvec(&[1.0, 1.0, 1.0]), vec![0.5, 1.0, 1.5]);
    }

    #[test]
    fn from_dense_validates() {
        let m = DenseMatrix::from_rows(2, 2, vec![1.0, 2.0, 2.0, 3.0]);
        assert!(SymmetricMatrix::from_dense(m, 0.0).is_ok());
        let m = DenseMatrix::from_rows(2, 2, vec![1.0, 2.0, 2.5, 3.0]);
        assert!(SymmetricMatrix::from_dense(m, 1e-12).is_err());
        let m = DenseMatrix::from_rows(1, 1, vec![f64::NAN]);
        assert!(SymmetricMatrix::from_dense(m, 1e-12).is_err());
    }

    #[test]
    fn products() {
        let a = DenseMatrix::from_rows(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let p = a.matmul(&a.transpose());
        assert_eq!(p.as_slice(), &[14.0, 32.0, 32.0, 77.0]);
        assert_eq!(a.matvec(&[1.0, 0.0, -1.0]), vec![-2.0, -2.0]);
    }

    #[test]
    fn state_algebra() {
        let v = StateVector::new(vec![3.0, 4.0]).normalized();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        let mut w = StateVector::unit(2, 0);
        w.axpy(2.0, &v);
        assert!((w.amps()[0] - 2.2).abs() < 1e-15 && (w.amps()[1] - 1.6).abs() < 1e-15);
    }
}
