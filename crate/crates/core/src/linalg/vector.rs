use std::ops::Index;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{check_dim, Result};
use crate::scalar::{to_c64, Real};

/// Element of C^n. The coefficient field `R` is the exact/floating mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector<R> {
    entries: Vec<Complex<R>>,
}

impl<R: Real> ComplexVector<R> {
    pub fn new(entries: Vec<Complex<R>>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![Complex::zero(); dim] }
    }

    /// The `i`-th standard basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = Complex::new(R::one(), R::zero());
        v
    }

    pub fn from_real(values: &[R]) -> Self {
        Self::new(values.iter().map(|x| Complex::new(x.clone(), R::zero())).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex<R>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex<R>> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<R>> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() - b.clone()).collect()))
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Self::new(self.entries.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn scale_real(&self, c: &R) -> Self {
        Self::new(self.entries.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `(self, other)`, conjugate-linear in `other`.
    pub fn inner(&self, other: &Self) -> Result<Complex<R>> {
        hermitian_inner(self, other)
    }

    /// `(v, v)`, exact in exact mode.
    pub fn norm_sqr(&self) -> R {
        self.entries.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    pub fn to_float(&self) -> ComplexVector<f64> {
        ComplexVector::new(self.entries.iter().map(to_c64).collect())
    }
}

impl<R> Index<usize> for ComplexVector<R> {
    type Output = Complex<R>;

    fn index(&self, i: usize) -> &Complex<R> {
        &self.entries[i]
    }
}

impl<R: Real> FromIterator<Complex<R>> for ComplexVector<R> {
    fn from_iter<I: IntoIterator<Item = Complex<R>>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Hermitian product `(u, v) = Σ u_i · conj(v_i)`.
pub fn hermitian_inner<R: Real>(u: &ComplexVector<R>, v: &ComplexVector<R>) -> Result<Complex<R>> {
    check_dim(u.dim(), v.dim())?;
    Ok(u.entries.iter().zip(&v.entries).fold(Complex::zero(), |acc, (a, b)| acc + a.clone() * b.conj()))
}
