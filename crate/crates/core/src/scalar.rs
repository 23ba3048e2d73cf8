//! Scalar abstraction shared by the exact and floating linear algebra.
//!
//! Every vector and matrix in the crate is `Complex<R>` for some [`Real`]
//! field `R`. Exact mode is `R = BigRational` (Gaussian rationals), floating
//! mode is `R = f64` (or `f32`). Conversion only goes exact → floating.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Real coefficient field underlying a complex scalar type.
pub trait Real: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    fn from_i64(v: i64) -> Self;

    /// Rank over C of the span of `rows`.
    ///
    /// Exact fields eliminate exactly and ignore `tol`; floating fields count
    /// singular values above `tol` times the largest one.
    fn complex_rank(rows: &[Vec<Complex<Self>>], tol: f64) -> usize;
}

/// Floating fields that support transcendental functions.
pub trait FloatReal: Real + num_traits::Float {
    fn from_f64(v: f64) -> Self;
}

pub type GaussianRational = Complex<BigRational>;

fn svd_rank(rows: Vec<Vec<Complex<f64>>>, tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let (r, c) = (rows.len(), rows[0].len());
    let m = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
    let sv = m.svd(false, false).singular_values;
    let largest = sv.iter().cloned().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * largest).count()
}

impl Real for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn complex_rank(rows: &[Vec<Complex<Self>>], tol: f64) -> usize {
        svd_rank(rows.to_vec(), tol)
    }
}

impl FloatReal for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Real for f32 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn complex_rank(rows: &[Vec<Complex<Self>>], tol: f64) -> usize {
        let rows = rows.iter().map(|r| r.iter().map(|z| Complex::new(z.re as f64, z.im as f64)).collect()).collect();
        svd_rank(rows, tol)
    }
}

impl FloatReal for f32 {
    fn from_f64(v: f64) -> Self {
        v as f32
    }
}

impl Real for BigRational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn complex_rank(rows: &[Vec<Complex<Self>>], _tol: f64) -> usize {
        exact_rank(rows.to_vec())
    }
}

/// Gaussian elimination over any exact field of complex scalars.
pub(crate) fn exact_rank<R: Real>(mut rows: Vec<Vec<Complex<R>>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = Complex::<R>::one() / rows[rank][col].clone();
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone() * inv.clone();
            for c in col..cols {
                let sub = factor.clone() * pivot_row[c].clone();
                row[c] = row[c].clone() - sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Parse an exact rational from `"p/q"`, an integer, or a decimal literal
/// such as `"0.25"` or `"1e-8"` (read exactly, never through a float).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Format(format!("invalid rational literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Format(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(joined.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gaussian(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

/// Gaussian rational with integer parts.
pub fn gaussian_int(re: i64, im: i64) -> GaussianRational {
    Complex::new(BigRational::from_i64(re), BigRational::from_i64(im))
}

pub fn to_c64<R: Real>(z: &Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}
