use num_complex::Complex;
use num_traits::{One, Zero};

use super::vector::ComplexVector;
use crate::error::{check_dim, Error, Result};
use crate::scalar::{to_c64, Real};

/// Entrywise tolerance for the skew-hermitian certificate in floating mode.
pub const SKEW_TOL: f64 = 1e-12;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<R>>,
    skew_hermitian: bool,
}

impl<R: Real> ComplexMatrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<R>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Format("matrix dimensions must be positive".into()));
        }
        check_dim(rows * cols, data.len())?;
        let mut m = Self { rows, cols, data, skew_hermitian: false };
        m.skew_hermitian = m.check_skew_hermitian();
        Ok(m)
    }

    /// Builds a matrix that must pass the skew-hermitian check.
    pub fn skew_hermitian(rows: usize, data: Vec<Complex<R>>) -> Result<Self> {
        let m = Self::new(rows, rows, data)?;
        if !m.skew_hermitian {
            return Err(Error::InvalidRepresentation("matrix is not skew-hermitian".into()));
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        let mut m = Self { rows, cols, data, skew_hermitian: false };
        m.skew_hermitian = m.check_skew_hermitian();
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn diagonal(diag: &[Complex<R>]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { Complex::zero() })
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

    /// Whether the matrix was certified `A† = -A` at construction.
    pub fn skew_flag(&self) -> bool {
        self.skew_hermitian
    }

    pub fn data(&self) -> &[Complex<R>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex<R> {
        &self.data[i * self.cols + j]
    }

    fn check_skew_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            for j in i..n {
                let sum = self.get(i, j).clone() + self.get(j, i).conj();
                let ok = if R::EXACT { sum.is_zero() } else { to_c64(&sum).norm() <= SKEW_TOL };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul_vec(&self, v: &ComplexVector<R>) -> Result<ComplexVector<R>> {
        check_dim(self.cols, v.dim())?;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Complex::zero(), |acc: Complex<R>, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut data = vec![Complex::<R>::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    data[idx] = data[idx].clone() + a.clone() * other.get(k, j).clone();
                }
            }
        }
        Self::new(self.rows, other.cols, data)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<R>, Complex<R>) -> Complex<R>) -> Result<Self> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a.clone(), b.clone())).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() * c.clone())
    }

    pub fn scale_real(&self, c: &R) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() * c.clone())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Real Frobenius pairing `Re tr(A† B)`.
    pub fn frobenius_dot(&self, other: &Self) -> Result<R> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(self.data.iter().zip(&other.data).fold(R::zero(), |acc, (a, b)| acc + (a.conj() * b.clone()).re))
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols).map(|j| (0..self.rows).map(|i| to_c64(self.get(i, j)).norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|z| to_c64(z).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Row-major entries as a single vector (used for span tests on matrices).
    pub fn vectorize(&self) -> ComplexVector<R> {
        ComplexVector::new(self.data.clone())
    }

    pub fn to_float(&self) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| to_c64(self.get(i, j)))
    }
}

impl ComplexMatrix<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex<f64>> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| *self.get(i, j))
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<Complex<f64>>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Spectral norm (largest singular value).
    pub fn norm_operator(&self) -> f64 {
        self.to_nalgebra().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
    }
}
