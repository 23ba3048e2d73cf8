//! Univariate polynomials over `Complex<R>` and square-free decomposition.
//!
//! Only meaningful over an exact field; with `BigRational` this is Q(i).

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

/// Coefficients in increasing degree, with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> Poly<R> {
    pub fn new(mut coeffs: Vec<Complex<R>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![Complex::one()] }
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Complex<R>> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * Complex::new(R::from_i64(k as i64), R::zero()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lead) => {
                let inv = Complex::<R>::one() / lead.clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() * inv.clone()).collect())
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero).clone() - other.coeffs.get(k).unwrap_or(&zero).clone())
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Complex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("nonzero divisor");
        let lead = divisor.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        let Some(top) = self.degree().filter(|&t| t >= dd) else {
            return (Self::new(Vec::new()), self.clone());
        };
        let mut quot = vec![Complex::zero(); top - dd + 1];
        for k in (dd..=top).rev() {
            let c = rem[k].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].clone() - c.clone() * b.clone();
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &Complex<R>) -> Complex<R> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

/// Yun's square-free decomposition: monic `a_1, a_2, …` with
/// `f = lc(f) · Π a_i^i`, each `a_i` square-free and pairwise coprime.
///
/// Entry `i - 1` of the result is `a_i`; trailing trivial factors are dropped.
pub fn square_free_decomposition<R: Real>(f: &Poly<R>) -> Vec<Poly<R>> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let c = f.gcd(&df);
    let mut w = f.div_rem(&c).0;
    let mut y = df.div_rem(&c).0;
    let mut z = y.sub(&w.derivative());
    let mut factors = Vec::new();
    while w.degree().unwrap_or(0) > 0 {
        let a = w.gcd(&z);
        w = w.div_rem(&a).0;
        y = z.div_rem(&a).0;
        z = y.sub(&w.derivative());
        factors.push(a);
    }
    while factors.last().is_some_and(|a| a.degree() == Some(0)) {
        factors.pop();
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gaussian_int;
    use num_rational::BigRational;

    fn p(cs: &[(i64, i64)]) -> Poly<BigRational> {
        Poly::new(cs.iter().map(|&(a, b)| gaussian_int(a, b)).collect())
    }

    fn expand(factors: &[Poly<BigRational>]) -> Poly<BigRational> {
        let mut out = Poly::one();
        for (i, a) in factors.iter().enumerate() {
            for _ in 0..=i {
                out = out.mul(a);
            }
        }
        out
    }

    #[test]
    fn division_identity() {
        let a = p(&[(1, 0), (2, 1), (0, 0), (3, -2)]);
        let b = p(&[(1, 1), (1, 0)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).sub(&a.sub(&r)), Poly::new(Vec::new()));
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let l = p(&[(0, -1), (1, 0)]); // x - i
        let a = l.mul(&p(&[(2, 0), (1, 0)]));
        let b = l.mul(&p(&[(-3, 0), (1, 0)]));
        assert_eq!(a.gcd(&b), l);
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let l1 = p(&[(0, 0), (1, 0)]); // x
        let l2 = p(&[(1, 1), (1, 0)]); // x + 1 + i
        let l3 = p(&[(-2, 0), (1, 0)]); // x - 2
        let f = l1.mul(&l2).mul(&l2).mul(&l3).mul(&l3).mul(&l3);
        let sf = square_free_decomposition(&f);
        assert_eq!(sf, vec![l1, l2, l3]);
        assert_eq!(expand(&sf), f.monic());
    }

    #[test]
    fn yun_with_gap_and_constant() {
        let l = p(&[(1, 0), (1, 0)]);
        let f = l.mul(&l).mul(&p(&[(5, 0)]));
        let sf = square_free_decomposition(&f);
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0].degree(), Some(0));
        assert_eq!(sf[1], l);
        assert!(square_free_decomposition(&p(&[(7, 0)])).is_empty());
    }
}
