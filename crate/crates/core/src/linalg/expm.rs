//! Matrix exponential by scaling and squaring with a truncated Taylor series.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::FloatReal;

/// Scaled norm targeted before the Taylor evaluation.
const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 40;

/// `exp(A)` for a square floating matrix.
pub fn matrix_exp<R: FloatReal>(a: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
    let e = matrix_expm1(a)?;
    e.add(&ComplexMatrix::identity(a.rows()))
}

/// `exp(A) - I`, accurate when `A` is small.
///
/// Squaring uses `exp(2X) - I = E^2 + 2E` with `E = exp(X) - I`.
pub fn matrix_expm1<R: FloatReal>(a: &ComplexMatrix<R>) -> Result<ComplexMatrix<R>> {
    if !a.is_square() {
        return Err(Error::Dimension { expected: a.rows(), found: a.cols() });
    }
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(Error::Format("matrix exponential of non-finite matrix".into()));
    }
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as u32 } else { 0 };
    let scale = R::from_f64(0.5f64.powi(squarings as i32));
    let scaled = a.scale_real(&scale);

    let mut result = scaled.clone();
    let mut term = scaled.clone();
    let eps = crate::scalar::Real::to_f64(&R::epsilon());
    for k in 2..=MAX_TERMS {
        if term.data().iter().all(|z| z.is_zero()) {
            break;
        }
        term = term.mul(&scaled)?.scale_real(&R::from_f64(1.0 / k as f64));
        let term_norm = term.norm_one();
        result = result.add(&term)?;
        if term_norm <= eps * result.norm_one() {
            break;
        }
    }
    let two = R::from_f64(2.0);
    for _ in 0..squarings {
        result = result.mul(&result)?.add(&result.scale_real(&two))?;
    }
    Ok(result)
}

/// `exp(D)` for a diagonal matrix given by its diagonal.
pub fn diagonal_exp<R: FloatReal>(diag: &[Complex<R>]) -> Vec<Complex<R>> {
    diag.iter().map(|z| z.exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn zero_gives_identity() {
        let z = ComplexMatrix::<f64>::zeros(3, 3);
        assert_eq!(matrix_exp(&z).unwrap(), ComplexMatrix::identity(3));
    }

    #[test]
    fn diagonal_pi_rotation() {
        let a = ComplexMatrix::diagonal(&[c(0.0, PI), c(0.0, -PI)]);
        let e = matrix_exp(&a).unwrap();
        let target = ComplexMatrix::diagonal(&[c(-1.0, 0.0), c(-1.0, 0.0)]);
        assert!(e.sub(&target).unwrap().norm_frobenius() <= 1e-10);
    }

    #[test]
    fn nilpotent_is_exact() {
        let a = ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e = matrix_exp(&a).unwrap();
        let expected = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn expm1_keeps_small_increments() {
        let a = ComplexMatrix::diagonal(&[c(1e-12, 0.0), c(0.0, 3.0)]);
        let e = matrix_expm1(&a).unwrap();
        assert!((e.get(0, 0).re - 1e-12).abs() < 1e-24);
        let full = matrix_exp(&a).unwrap();
        assert!((e.get(1, 1) + c(1.0, 0.0) - full.get(1, 1)).norm() < 1e-14);
    }

    #[test]
    fn non_square_rejected() {
        let a = ComplexMatrix::<f64>::zeros(2, 3);
        assert!(matches!(matrix_exp(&a), Err(Error::Dimension { .. })));
    }

    #[test]
    fn works_in_single_precision() {
        let a = ComplexMatrix::<f32>::diagonal(&[Complex::new(0.0, 1.0), Complex::new(1.0, 0.0)]);
        let e = matrix_exp(&a).unwrap();
        assert!((e.get(1, 1).re - std::f32::consts::E).abs() < 1e-5);
        assert!((e.get(0, 0).re - 1f32.cos()).abs() < 1e-6);
    }
}
