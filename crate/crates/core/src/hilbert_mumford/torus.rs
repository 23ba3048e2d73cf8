//! Exact closedness oracle for torus actions.
//!
//! The orbit of `v` is closed iff 0 lies in the relative interior of the
//! convex hull of the weights supporting `v`; it lies in the null cone iff
//! 0 is outside that hull. Both questions are exact rational LPs.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::simplex::feasible_point;
use crate::error::{check_dim, Error, Result};
use crate::linalg::ComplexVector;
use crate::representation::TorusRep;
use crate::scalar::{GaussianRational, Real};

/// Largest box half-width tried by the cocharacter search.
pub const SEARCH_LIMIT: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusKind {
    Closed,
    SemistableNotClosed,
    NullCone,
}

/// Witness attached to a [`TorusVerdict`].
#[derive(Clone, Debug, PartialEq)]
pub enum TorusCertificate {
    /// Positive coefficients, summing to one, that balance the support weights.
    Balanced { weights: Vec<Vec<i64>>, coefficients: Vec<BigRational> },
    /// Integer cocharacter whose limit `t → 0` exists and moves `v`.
    Cocharacter(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusVerdict {
    pub kind: TorusKind,
    pub certificate: TorusCertificate,
}

/// Distinct weights `a_i` of the coordinates where `v` is nonzero.
///
/// Exact vectors use an exact zero test; floating vectors treat
/// `|v_i| ≤ zero_tol · ||v||` as zero.
pub fn support_weights<R: Real>(rep: &TorusRep, v: &ComplexVector<R>, zero_tol: f64) -> Result<Vec<Vec<i64>>> {
    check_dim(rep.dim(), v.dim())?;
    let norm = v.norm();
    let mut out: Vec<Vec<i64>> = Vec::new();
    for (i, z) in v.iter().enumerate() {
        let nonzero = if R::EXACT { !z.is_zero() } else { z.norm_sqr().to_f64().sqrt() > zero_tol * norm };
        if nonzero && !out.iter().any(|w| w.as_slice() == rep.weight(i)) {
            out.push(rep.weight(i).to_vec());
        }
    }
    Ok(out)
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Strictly positive balancing coefficients, if any exist.
fn balancing_coefficients(support: &[Vec<i64>]) -> Option<Vec<BigRational>> {
    let r = support[0].len();
    // c = 1 + s with s ≥ 0:  Σ s_k a_k = -Σ a_k
    let m: Vec<Vec<BigRational>> = (0..r).map(|j| support.iter().map(|a| q(a[j])).collect()).collect();
    let b: Vec<BigRational> = (0..r).map(|j| -support.iter().map(|a| q(a[j])).sum::<BigRational>()).collect();
    let s = feasible_point(&m, &b)?;
    let c: Vec<BigRational> = s.into_iter().map(|x| x + BigRational::one()).collect();
    let total: BigRational = c.iter().cloned().sum();
    Some(c.into_iter().map(|x| x / total.clone()).collect())
}

/// Whether 0 lies in the convex hull of `support`.
fn hull_contains_origin(support: &[Vec<i64>]) -> bool {
    let r = support[0].len();
    let mut m: Vec<Vec<BigRational>> = (0..r).map(|j| support.iter().map(|a| q(a[j])).collect()).collect();
    m.push(vec![BigRational::one(); support.len()]);
    let mut b = vec![BigRational::zero(); r];
    b.push(BigRational::one());
    feasible_point(&m, &b).is_some()
}

fn classify_support(support: &[Vec<i64>]) -> (TorusKind, Option<Vec<BigRational>>) {
    if support.is_empty() {
        return (TorusKind::Closed, Some(Vec::new()));
    }
    if let Some(c) = balancing_coefficients(support) {
        return (TorusKind::Closed, Some(c));
    }
    if hull_contains_origin(support) {
        (TorusKind::SemistableNotClosed, None)
    } else {
        (TorusKind::NullCone, None)
    }
}

/// Exact trichotomy for a torus orbit, with a re-verifiable certificate.
pub fn torus_orbit_oracle(rep: &TorusRep, v: &ComplexVector<BigRational>) -> Result<TorusVerdict> {
    let support = support_weights(rep, v, 0.0)?;
    verdict_for_support(&support)
}

/// Same trichotomy from a precomputed support.
pub fn verdict_for_support(support: &[Vec<i64>]) -> Result<TorusVerdict> {
    let (kind, coefficients) = classify_support(support);
    let certificate = match coefficients {
        Some(coefficients) => TorusCertificate::Balanced { weights: support.to_vec(), coefficients },
        None => TorusCertificate::Cocharacter(search_cocharacter(support, kind == TorusKind::NullCone)?),
    };
    Ok(TorusVerdict { kind, certificate })
}

/// One-parameter subgroup `τ : C^× → G`.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum OnePS {
    /// Integer cocharacter of a torus; coordinate `i` scales by `t^{⟨a_i, λ⟩}`.
    Torus { lambda: Vec<i64> },
    /// SL(2) cocharacter that scales the linear form `a·x + b·y` by `t`
    /// (and an orthogonal complement by `t^{-1}`); the form divides `f` to
    /// the stated power.
    BinaryForm { linear_form: [GaussianRational; 2], multiplicity: u32 },
}

impl OnePS {
    /// Compact generator `ξ_τ = Σ λ_j ξ_j` in torus coordinates.
    pub fn torus_generator(&self) -> Option<Vec<f64>> {
        match self {
            OnePS::Torus { lambda } => Some(lambda.iter().map(|x| *x as f64).collect()),
            OnePS::BinaryForm { .. } => None,
        }
    }
}

/// Integer `λ` with `⟨a_i, λ⟩ ≥ 0` on the support and `> 0` somewhere, of
/// minimal max-norm; `None` exactly when the orbit is closed.
pub fn find_destabilizing_1ps(rep: &TorusRep, v: &ComplexVector<BigRational>) -> Result<Option<OnePS>> {
    let support = support_weights(rep, v, 0.0)?;
    let (kind, _) = classify_support(&support);
    if kind == TorusKind::Closed {
        return Ok(None);
    }
    let lambda = search_cocharacter(&support, kind == TorusKind::NullCone)?;
    Ok(Some(OnePS::Torus { lambda }))
}

/// Exhaustive search over boxes `||λ||_∞ ≤ B`, `B = 1, 2, 4, …`.
///
/// With `strict`, every support pairing must be positive; otherwise all
/// pairings are nonnegative and at least one is positive. The last
/// coordinate is solved as an interval for each choice of the others.
fn search_cocharacter(support: &[Vec<i64>], strict: bool) -> Result<Vec<i64>> {
    let r = support.first().map(Vec::len).ok_or(Error::SearchBudgetExceeded)?;
    let mut bound = 1i64;
    while bound <= SEARCH_LIMIT {
        if let Some(lambda) = search_box(support, r, bound, strict) {
            return Ok(lambda);
        }
        bound *= 2;
    }
    Err(Error::SearchBudgetExceeded)
}

fn search_box(support: &[Vec<i64>], r: usize, bound: i64, strict: bool) -> Option<Vec<i64>> {
    let lo = if strict { 1 } else { 0 };
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut prefix = vec![-bound; r - 1];
    loop {
        let partial: Vec<i64> =
            support.iter().map(|a| a[..r - 1].iter().zip(&prefix).map(|(x, y)| x * y).sum()).collect();
        if let Some(last) = solve_last(support, r, &partial, bound, lo, strict) {
            let mut lambda = prefix.clone();
            lambda.push(last);
            let norm = lambda.iter().map(|x| x.abs()).max().unwrap_or(0);
            if best.as_ref().is_none_or(|(b, _)| norm < *b) {
                best = Some((norm, lambda));
            }
        }
        // Odometer over the first r-1 coordinates.
        let mut k = 0;
        loop {
            if k == r - 1 {
                return best.map(|(_, l)| l);
            }
            if prefix[k] < bound {
                prefix[k] += 1;
                break;
            }
            prefix[k] = -bound;
            k += 1;
        }
    }
}

/// Best last coordinate for a fixed prefix: satisfies `a_i,last·x + p_i ≥ lo`,
/// lies in `[-bound, bound]`, and (non-strict case) makes some pairing positive.
fn solve_last(support: &[Vec<i64>], r: usize, partial: &[i64], bound: i64, lo: i64, strict: bool) -> Option<i64> {
    let (mut low, mut high) = (-bound, bound);
    for (a, p) in support.iter().zip(partial) {
        let coef = a[r - 1];
        let need = lo - p;
        match coef.signum() {
            0 => {
                if need > 0 {
                    return None;
                }
            }
            1 => low = low.max(div_ceil(need, coef)),
            _ => high = high.min(div_floor(need, coef)),
        }
    }
    if low > high {
        return None;
    }
    let valid = |x: i64| strict || support.iter().zip(partial).any(|(a, p)| a[r - 1] * x + p > 0);
    // Candidates by increasing |x|; at most one value in the interval can make
    // every pairing vanish unless the last column is zero.
    let center = 0i64.clamp(low, high);
    let mut candidates = vec![center];
    for step in 1..=2 {
        for x in [center - step, center + step] {
            if (low..=high).contains(&x) {
                candidates.push(x);
            }
        }
    }
    candidates.sort_by_key(|x| (x.abs(), *x));
    candidates.into_iter().find(|&x| valid(x))
}

fn div_floor(a: i64, b: i64) -> i64 {
    let d = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        d - 1
    } else {
        d
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

impl TorusVerdict {
    /// Re-check the certificate against `support` in exact arithmetic.
    pub fn verify(&self, support: &[Vec<i64>]) -> bool {
        match (&self.kind, &self.certificate) {
            (TorusKind::Closed, TorusCertificate::Balanced { weights, coefficients }) => {
                if weights.len() != coefficients.len() || weights.len() != support.len() {
                    return false;
                }
                if support.is_empty() {
                    return true;
                }
                let positive = coefficients.iter().all(|c| c.is_positive());
                let sum_one = coefficients.iter().cloned().sum::<BigRational>() == BigRational::one();
                let r = weights[0].len();
                let balanced = (0..r).all(|j| {
                    weights.iter().zip(coefficients).map(|(a, c)| q(a[j]) * c.clone()).sum::<BigRational>().is_zero()
                });
                positive && sum_one && balanced && weights.iter().all(|w| support.contains(w))
            }
            (kind, TorusCertificate::Cocharacter(lambda)) => {
                let m: Vec<i64> = support.iter().map(|a| a.iter().zip(lambda).map(|(x, y)| x * y).sum()).collect();
                match kind {
                    TorusKind::NullCone => !m.is_empty() && m.iter().all(|x| *x > 0),
                    TorusKind::SemistableNotClosed => {
                        m.iter().all(|x| *x >= 0) && m.iter().any(|x| *x > 0) && m.contains(&0)
                    }
                    TorusKind::Closed => false,
                }
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian_int, rational};

    fn rep(weights: &[&[i64]]) -> TorusRep {
        TorusRep::new(weights.iter().map(|w| w.to_vec()).collect()).unwrap()
    }

    fn ev(xs: &[i64]) -> ComplexVector<BigRational> {
        xs.iter().map(|&x| gaussian_int(x, 0)).collect()
    }

    #[test]
    fn support_examples() {
        let t = rep(&[&[1], &[-1]]);
        assert_eq!(support_weights(&t, &ev(&[1, 1]), 0.0).unwrap(), vec![vec![1], vec![-1]]);
        assert_eq!(support_weights(&t, &ev(&[0, 5]), 0.0).unwrap(), vec![vec![-1]]);
        assert!(support_weights(&t, &ev(&[0, 0]), 0.0).unwrap().is_empty());
        let f = ev(&[1, 0]).to_float();
        assert_eq!(support_weights(&t, &f, 1e-12).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn oracle_examples() {
        let t = rep(&[&[1], &[-1]]);
        let v = torus_orbit_oracle(&t, &ev(&[1, 1])).unwrap();
        assert_eq!(v.kind, TorusKind::Closed);
        assert_eq!(
            v.certificate,
            TorusCertificate::Balanced {
                weights: vec![vec![1], vec![-1]],
                coefficients: vec![rational(1, 2), rational(1, 2)]
            }
        );

        let t = rep(&[&[1]]);
        let v = torus_orbit_oracle(&t, &ev(&[1])).unwrap();
        assert_eq!(v.kind, TorusKind::NullCone);
        assert_eq!(v.certificate, TorusCertificate::Cocharacter(vec![1]));

        let t = rep(&[&[2], &[0], &[-1]]);
        let v = torus_orbit_oracle(&t, &ev(&[1, 1, 0])).unwrap();
        assert_eq!(v.kind, TorusKind::SemistableNotClosed);
        assert_eq!(v.certificate, TorusCertificate::Cocharacter(vec![1]));

        let t = rep(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let v = torus_orbit_oracle(&t, &ev(&[1, 1, 1])).unwrap();
        assert_eq!(v.kind, TorusKind::Closed);
        let TorusCertificate::Balanced { coefficients, .. } = &v.certificate else { panic!() };
        assert_eq!(coefficients, &vec![rational(1, 3); 3]);
    }

    #[test]
    fn zero_vector_is_closed() {
        let t = rep(&[&[3], &[1]]);
        let v = torus_orbit_oracle(&t, &ev(&[0, 0])).unwrap();
        assert_eq!(v.kind, TorusKind::Closed);
        assert!(v.verify(&[]));
    }

    #[test]
    fn destabilizing_examples() {
        assert_eq!(find_destabilizing_1ps(&rep(&[&[1], &[-1]]), &ev(&[1, 1])).unwrap(), None);
        assert_eq!(find_destabilizing_1ps(&rep(&[&[1]]), &ev(&[1])).unwrap(), Some(OnePS::Torus { lambda: vec![1] }));
        assert_eq!(
            find_destabilizing_1ps(&rep(&[&[2], &[0], &[-1]]), &ev(&[1, 1, 0])).unwrap(),
            Some(OnePS::Torus { lambda: vec![1] })
        );
    }

    #[test]
    fn search_needs_larger_box() {
        // Support {(5,-4), (-4,3)}: 0 is outside the hull; every λ with both
        // pairings positive has max-norm at least 7.
        let support = vec![vec![5, -4], vec![-4, 3]];
        let lambda = search_cocharacter(&support, true).unwrap();
        assert!(support.iter().all(|a| a[0] * lambda[0] + a[1] * lambda[1] > 0));
        let norm = lambda.iter().map(|x| x.abs()).max().unwrap();
        // Brute-force minimum over a generous box.
        let mut best = i64::MAX;
        for x in -40..=40i64 {
            for y in -40..=40i64 {
                if support.iter().all(|a| a[0] * x + a[1] * y > 0) {
                    best = best.min(x.abs().max(y.abs()));
                }
            }
        }
        assert_eq!(norm, best);
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(div_floor(-3, 2), -2);
        assert_eq!(div_floor(3, -2), -2);
        assert_eq!(div_floor(4, 2), 2);
        assert_eq!(div_ceil(-3, 2), -1);
        assert_eq!(div_ceil(3, 2), 2);
    }
}
