//! Exact SL(2) orbit classification for binary forms by root multiplicities.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{square_free_decomposition, Poly};
use super::torus::{OnePS, TorusKind};
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Real};

/// Verdict of [`sl2_form_oracle`].
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Verdict {
    pub kind: TorusKind,
    /// Multiplicity of every distinct root of `f` on the projective line, decreasing.
    pub multiplicities: Vec<u32>,
    /// Linear form dividing `f` to the maximal multiplicity, for non-closed orbits.
    pub witness: Option<OnePS>,
}

/// `f(pX + qY, rX + sY)` for `f = Σ_k c_k x^{d-k} y^k`, returned in the same
/// coefficient layout with respect to `X, Y`.
pub fn substitute<R: Real>(coeffs: &[Complex<R>], frame: &[[Complex<R>; 2]; 2]) -> Vec<Complex<R>> {
    let d = coeffs.len().saturating_sub(1);
    let x = [frame[0][0].clone(), frame[0][1].clone()];
    let y = [frame[1][0].clone(), frame[1][1].clone()];
    let x_powers = linear_powers(&x, d);
    let y_powers = linear_powers(&y, d);
    let mut out = vec![Complex::zero(); d + 1];
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = homogeneous_mul(&x_powers[d - k], &y_powers[k]);
        for (slot, t) in out.iter_mut().zip(term) {
            *slot = slot.clone() + c.clone() * t;
        }
    }
    out
}

/// Powers `(aX + bY)^j`, `j = 0..=d`, as coefficient lists indexed by the power of `Y`.
fn linear_powers<R: Real>(form: &[Complex<R>; 2], d: usize) -> Vec<Vec<Complex<R>>> {
    let mut powers = vec![vec![Complex::one()]];
    for _ in 0..d {
        let last = powers.last().expect("nonempty");
        powers.push(homogeneous_mul(last, &form[..]));
    }
    powers
}

fn homogeneous_mul<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> Vec<Complex<R>> {
    let mut out = vec![Complex::zero(); a.len() + b.len() - 1];
    for (i, u) in a.iter().enumerate() {
        for (j, w) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + u.clone() * w.clone();
        }
    }
    out
}

/// Substitution taking `f` to coordinates where `X` is the linear form
/// `a x + b y` and `Y` its orthogonal complement `-b̄ x + ā y`.
pub fn frame_for<R: Real>(linear_form: &[Complex<R>; 2]) -> [[Complex<R>; 2]; 2] {
    let [a, b] = linear_form;
    let norm = a.norm_sqr() + b.norm_sqr();
    let inv = Complex::new(R::one() / norm, R::zero());
    [[a.conj() * inv.clone(), -b.clone() * inv.clone()], [b.conj() * inv.clone(), a.clone() * inv]]
}

/// Exact SL(2) trichotomy for the binary form `Σ_k c_k x^{d-k} y^k`.
pub fn sl2_form_oracle(d: usize, coeffs: &[GaussianRational]) -> Result<Sl2Verdict> {
    if coeffs.len() != d + 1 {
        return Err(Error::Format(format!("degree {d} form needs {} coefficients, found {}", d + 1, coeffs.len())));
    }
    let Some(k_min) = coeffs.iter().position(|c| !c.is_zero()) else {
        return Ok(Sl2Verdict { kind: TorusKind::Closed, multiplicities: Vec::new(), witness: None });
    };
    // Roots at y = 0 come from the missing top powers of x.
    let dehomogenized: Poly<BigRational> = Poly::new(coeffs.iter().rev().cloned().collect());
    let factors = square_free_decomposition(&dehomogenized);

    let mut multiplicities: Vec<u32> = Vec::new();
    if k_min > 0 {
        multiplicities.push(k_min as u32);
    }
    for (i, a) in factors.iter().enumerate() {
        let deg = a.degree().unwrap_or(0);
        multiplicities.extend(std::iter::repeat_n(i as u32 + 1, deg));
    }
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    let top = multiplicities.first().copied().unwrap_or(0) as usize;

    let kind = if d == 0 || 2 * top < d {
        TorusKind::Closed
    } else if 2 * top > d {
        TorusKind::NullCone
    } else if multiplicities.len() == 2 {
        TorusKind::Closed
    } else {
        TorusKind::SemistableNotClosed
    };
    let witness = match kind {
        TorusKind::Closed => None,
        _ => Some(OnePS::BinaryForm { linear_form: root_form(k_min, top, &factors)?, multiplicity: top as u32 }),
    };
    Ok(Sl2Verdict { kind, multiplicities, witness })
}

/// The linear form vanishing at the unique root of multiplicity `top`.
fn root_form(k_min: usize, top: usize, factors: &[Poly<BigRational>]) -> Result<[GaussianRational; 2]> {
    if k_min == top {
        return Ok([GaussianRational::zero(), GaussianRational::one()]);
    }
    let a = factors
        .get(top - 1)
        .filter(|a| a.degree() == Some(1))
        .ok_or_else(|| Error::InvalidRepresentation("maximal multiplicity root is not unique".into()))?;
    // a = x - ρ (monic), so the form is x - ρ y.
    Ok([GaussianRational::one(), a.coeffs()[0].clone()])
}

/// Re-check that the witness form divides `f` to its stated power.
pub fn verify_sl2_witness(coeffs: &[GaussianRational], witness: &OnePS) -> bool {
    let OnePS::BinaryForm { linear_form, multiplicity } = witness else {
        return false;
    };
    if linear_form.iter().all(|c| c.is_zero()) {
        return false;
    }
    let d = coeffs.len().saturating_sub(1);
    let m = *multiplicity as usize;
    let g = substitute(coeffs, &frame_for(linear_form));
    // ℓ^m | f iff every monomial X^{d-k} Y^k present has d - k ≥ m.
    m <= d && g.iter().enumerate().all(|(k, c)| k + m <= d || c.is_zero())
}
