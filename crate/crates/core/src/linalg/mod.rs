//! Exact Gaussian-rational and floating complex linear algebra.

mod expm;
mod matrix;
mod vector;

pub use expm::{diagonal_exp, matrix_exp, matrix_expm1};
pub use matrix::{ComplexMatrix, SKEW_TOL};
pub use vector::{hermitian_inner, ComplexVector};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{check_dim, Result};
use crate::scalar::Real;

/// Default relative singular-value threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Dimension of the span of `vectors`.
///
/// Exact vectors are eliminated exactly (`tol` ignored); floating vectors
/// count singular values above `tol` relative to the largest.
pub fn subspace_dimension<R: Real>(vectors: &[ComplexVector<R>], tol: f64) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    for v in vectors {
        check_dim(first.dim(), v.dim())?;
    }
    let rows: Vec<Vec<Complex<R>>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    Ok(R::complex_rank(&rows, tol))
}

/// Orthonormal basis (as columns) of the null space of a real matrix.
pub fn real_kernel(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let largest = if a.is_empty() { 0.0 } else { a.clone().svd(false, false).singular_values.max() };
    real_kernel_below(a, tol * largest)
}

/// Null space of a real matrix counting singular values `≤ cut` as zero.
pub fn real_kernel_below(a: &DMatrix<f64>, cut: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to at least n rows so the thin SVD returns every right singular vector.
    let rows = a.nrows().max(n);
    let padded = DMatrix::from_fn(rows, n, |i, j| if i < a.nrows() { a[(i, j)] } else { 0.0 });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cut)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis (as columns) of the null space of a complex matrix.
pub fn complex_kernel(a: &DMatrix<Complex<f64>>, tol: f64) -> DMatrix<Complex<f64>> {
    let largest = if a.is_empty() { 0.0 } else { a.clone().svd(false, false).singular_values.max() };
    complex_kernel_below(a, tol * largest)
}

/// Null space of a complex matrix counting singular values `≤ cut` as zero.
pub fn complex_kernel_below(a: &DMatrix<Complex<f64>>, cut: f64) -> DMatrix<Complex<f64>> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let rows = a.nrows().max(n);
    let padded = DMatrix::from_fn(rows, n, |i, j| if i < a.nrows() { a[(i, j)] } else { Complex::new(0.0, 0.0) });
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let cols: Vec<DVector<Complex<f64>>> =
        svd.singular_values.iter().enumerate().filter(|(_, s)| **s <= cut).map(|(k, _)| v_t.row(k).adjoint()).collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis (as columns) of the span of the given complex vectors.
///
/// `scale` is the reference magnitude for the rank cut; vectors that are all
/// below `tol * scale` give an empty basis.
pub fn complex_span(vectors: &[ComplexVector<f64>], dim: usize, tol: f64, scale: f64) -> DMatrix<Complex<f64>> {
    if vectors.is_empty() {
        return DMatrix::zeros(dim, 0);
    }
    let m = DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i]);
    let svd = m.svd(true, false);
    let u = svd.u.expect("requested U");
    let cut = tol * scale.max(f64::MIN_POSITIVE);
    let cols: Vec<DVector<Complex<f64>>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > cut)
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Rank of a complex matrix given as columns, relative to the largest singular value.
pub fn column_rank(m: &DMatrix<Complex<f64>>, tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * largest).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian_int, rational, GaussianRational};
    use num_complex::Complex64;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn fv(xs: &[(f64, f64)]) -> ComplexVector<f64> {
        xs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()
    }

    #[test]
    fn inner_of_orthogonal_basis_vectors_is_zero() {
        let u = fv(&[(1.0, 0.0), (0.0, 0.0)]);
        let v = fv(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(hermitian_inner(&u, &v).unwrap(), Complex64::zero());
    }

    #[test]
    fn inner_of_one_i_with_itself() {
        let u = fv(&[(1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(hermitian_inner(&u, &u).unwrap(), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn exact_inner_is_rational() {
        let u: ComplexVector<BigRational> =
            vec![GaussianRational::new(rational(1, 2), rational(0, 1)), gaussian_int(3, 0)].into_iter().collect();
        let v: ComplexVector<BigRational> =
            vec![gaussian_int(2, 0), GaussianRational::new(rational(1, 3), rational(0, 1))].into_iter().collect();
        assert_eq!(hermitian_inner(&u, &v).unwrap(), gaussian_int(2, 0));
    }

    #[test]
    fn inner_dimension_mismatch() {
        let u = fv(&[(1.0, 0.0)]);
        let v = fv(&[(1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(hermitian_inner(&u, &v), Err(crate::Error::Dimension { .. })));
    }

    #[test]
    fn span_dimensions() {
        let vs = vec![fv(&[(1.0, 0.0), (0.0, 0.0)]), fv(&[(0.0, 0.0), (1.0, 0.0)]), fv(&[(1.0, 0.0), (1.0, 0.0)])];
        assert_eq!(subspace_dimension(&vs, DEFAULT_RANK_TOL).unwrap(), 2);
        let exact: Vec<ComplexVector<BigRational>> = vec![
            vec![gaussian_int(1, 0), gaussian_int(2, 0)].into_iter().collect(),
            vec![gaussian_int(2, 0), gaussian_int(4, 0)].into_iter().collect(),
        ];
        assert_eq!(subspace_dimension(&exact, 0.0).unwrap(), 1);
        let empty: Vec<ComplexVector<f64>> = vec![];
        assert_eq!(subspace_dimension(&empty, DEFAULT_RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn real_kernel_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = real_kernel(&a, 1e-12);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).norm() < 1e-12);
    }
}
