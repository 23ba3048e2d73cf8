//! Numeric SL(2) classification that does not use root-multiplicity thresholds.
//!
//! Evidence comes from three sources: the descent flow (collapse or a
//! moment-map zero), the exact rank-one torus oracle applied in many unitary
//! frames, and stabilizer dimensions. A frame in which the diagonal torus
//! has a limit with a strictly larger stabilizer than `f` proves the orbit
//! is not closed, since the limit lies in the orbit closure but not in the orbit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::binomial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::binary::substitute;
use super::torus::{verdict_for_support, TorusKind};
use crate::error::{Error, Result};
use crate::kempf_ness::{descend, KNOptions, TerminalReason};
use crate::linalg::column_rank;
use crate::representation::{BinaryFormRep, LieElement, Representation};
use crate::scalar::{to_c64, GaussianRational};
use crate::FloatVector;

/// Number of random unitary frames probed.
pub const RANDOM_FRAMES: usize = 200;
/// Normalized moment-map tolerance for the closed certificate.
pub const CLOSED_TOL: f64 = 1e-10;
/// Relative size below which a frame coefficient counts as zero.
const FRAME_ZERO_TOL: f64 = 1e-9;
const RANK_TOL: f64 = 1e-8;
/// Roots closer than this (relative) are treated as one multiple root.
const CLUSTER_TOL: f64 = 1e-2;
const SCHUR_ITERS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteForceKind {
    Closed,
    SemistableNotClosed,
    NullCone,
    /// The evidence is missing or contradictory.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceVerdict {
    pub kind: BruteForceKind,
    pub flow_reason: TerminalReason,
    pub frames_probed: usize,
    /// Complex dimension of the stabilizer of `f` in sl(2).
    pub stabilizer_dim: usize,
}

type Frame = [[Complex64; 2]; 2];

/// Classify the SL(2)-orbit of `Σ_k c_k x^{d-k} y^k` without root multiplicities.
pub fn sl2_brute_force_oracle(d: usize, coeffs: &[GaussianRational], seed: u64) -> Result<BruteForceVerdict> {
    if coeffs.len() != d + 1 {
        return Err(Error::Format(format!("degree {d} form needs {} coefficients, found {}", d + 1, coeffs.len())));
    }
    let f: Vec<Complex64> = coeffs.iter().map(to_c64).collect();
    let rep = Representation::binary_form(BinaryFormRep::new(d as i64)?)?;
    let v = rep.embed_float(&f.iter().cloned().collect())?;
    if v.is_zero() {
        return Ok(BruteForceVerdict {
            kind: BruteForceKind::Closed,
            flow_reason: TerminalReason::MuBelowTol,
            frames_probed: 0,
            stabilizer_dim: 3,
        });
    }
    let options = KNOptions { tol_mu: CLOSED_TOL, ..KNOptions::default() };
    let flow_reason = descend(&rep, &v, &options)?.terminal_reason;
    let stabilizer_dim = sl2_stabilizer_dim(&rep, &v)?;

    let mut frames: Vec<Frame> = vec![identity_frame(), swap_frame()];
    frames.extend(root_frames(&f));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    frames.extend((0..RANDOM_FRAMES).map(|_| haar_frame(&mut rng)));

    let mut null_evidence = flow_reason == TerminalReason::NullCollapse;
    let mut nonclosed_evidence = false;
    for frame in &frames {
        match probe_frame(d, &f, frame)? {
            TorusKind::NullCone => null_evidence = true,
            // The torus limit is a multiple of X^{d/2} Y^{d/2}, whose
            // stabilizer contains the diagonal torus.
            TorusKind::SemistableNotClosed if stabilizer_dim < 1 => nonclosed_evidence = true,
            _ => {}
        }
    }
    let closed_evidence = flow_reason == TerminalReason::MuBelowTol;
    // Frame certificates outrank the flow: near a non-closed orbit the flow
    // drifts off it through rounding and can report a spurious moment-map zero.
    let kind = if null_evidence {
        BruteForceKind::NullCone
    } else if nonclosed_evidence {
        BruteForceKind::SemistableNotClosed
    } else if closed_evidence {
        BruteForceKind::Closed
    } else {
        BruteForceKind::Inconclusive
    };
    Ok(BruteForceVerdict { kind, flow_reason, frames_probed: frames.len(), stabilizer_dim })
}

/// Complex dimension of `{ξ ∈ sl(2) : ξ v = 0}` for `v` in orthonormal coordinates.
fn sl2_stabilizer_dim(rep: &Representation, v: &FloatVector) -> Result<usize> {
    let m = rep.algebra_dim();
    let columns: Vec<FloatVector> = (0..m)
        .map(|j| {
            let mut c = vec![0.0; m];
            c[j] = 1.0;
            rep.act_lie(&LieElement::compact(c), v)
        })
        .collect::<Result<_>>()?;
    let mat = DMatrix::from_fn(v.dim(), m, |i, j| columns[j][i] / v.norm());
    Ok(m - column_rank(&mat, RANK_TOL))
}

/// Rank-one torus verdict for `f` rewritten in the frame.
fn probe_frame(d: usize, f: &[Complex64], frame: &Frame) -> Result<TorusKind> {
    let g = substitute(f, frame);
    // Orthonormal coordinates make the zero test frame-independent.
    let scaled: Vec<f64> =
        g.iter().enumerate().map(|(k, c)| c.norm() / (binomial(d as u64, k as u64) as f64).sqrt()).collect();
    let norm = scaled.iter().map(|x| x * x).sum::<f64>().sqrt();
    let support: Vec<Vec<i64>> = scaled
        .iter()
        .enumerate()
        .filter(|(_, x)| **x > FRAME_ZERO_TOL * norm)
        .map(|(k, _)| vec![d as i64 - 2 * k as i64])
        .collect();
    let mut distinct: Vec<Vec<i64>> = Vec::new();
    for w in support {
        if !distinct.contains(&w) {
            distinct.push(w);
        }
    }
    Ok(verdict_for_support(&distinct)?.kind)
}

fn identity_frame() -> Frame {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, l]]
}

fn swap_frame() -> Frame {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[o, l], [l, o]]
}

/// Unitary frame whose first coordinate `X` is the unit linear form `a x + b y`.
fn unitary_frame(a: Complex64, b: Complex64) -> Frame {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    [[a.conj(), -b], [b.conj(), a]]
}

/// Haar-distributed element of SU(2) from a Gaussian 4-vector.
fn haar_frame(rng: &mut ChaCha8Rng) -> Frame {
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    unitary_frame(Complex64::new(g(), g()), Complex64::new(g(), g()))
}

/// Frames aligned with the numerically computed roots of `f`, refined at
/// clusters so that multiple roots are accurate.
fn root_frames(f: &[Complex64]) -> Vec<Frame> {
    // p(x) = f(x, 1) = Σ c_k x^{d-k}, coefficients from the top degree down.
    let Some(first) = f.iter().position(|c| c.norm() > 0.0) else {
        return Vec::new();
    };
    let p: Vec<Complex64> = f[first..].to_vec();
    let degree = p.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let roots = polynomial_roots(&p);
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for r in roots {
        match clusters.iter_mut().find(|c| (c[0] - r).norm() <= CLUSTER_TOL * (1.0 + r.norm())) {
            Some(c) => c.push(r),
            None => clusters.push(vec![r]),
        }
    }
    let mut frames = Vec::new();
    for cluster in clusters {
        let mean = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        let refined = refine_multiple_root(&p, mean, cluster.len());
        for rho in [mean, refined] {
            // Root ρ of p corresponds to the factor x - ρ y.
            frames.push(unitary_frame(Complex64::new(1.0, 0.0), -rho));
        }
    }
    frames
}

/// Eigenvalues of the companion matrix of `p` (coefficients from the top degree).
fn polynomial_roots(p: &[Complex64]) -> Vec<Complex64> {
    // Zero roots come from trailing zero coefficients and are split off exactly.
    let zeros = p.iter().rev().take_while(|c| c.norm() == 0.0).count();
    let p = &p[..p.len() - zeros];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = p.len() - 1;
    if n == 0 {
        return roots;
    }
    let lead = p[0];
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -p[j + 1] / lead;
    }
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    if let Some(ev) =
        nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, SCHUR_ITERS).and_then(|s| s.eigenvalues())
    {
        roots.extend(ev.iter().cloned());
    }
    roots
}

/// Newton iteration on `p^{(m-1)}`, where an `m`-fold root of `p` is simple.
fn refine_multiple_root(p: &[Complex64], start: Complex64, m: usize) -> Complex64 {
    let mut q: Vec<Complex64> = p.to_vec();
    for _ in 1..m {
        q = derivative_top_down(&q);
    }
    let dq = derivative_top_down(&q);
    let mut x = start;
    for _ in 0..50 {
        let (value, slope) = (horner(&q, x), horner(&dq, x));
        if slope.norm() == 0.0 {
            break;
        }
        let step = value / slope;
        x -= step;
        if step.norm() <= 1e-16 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}

fn derivative_top_down(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    if n == 0 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    p[..n].iter().enumerate().map(|(i, c)| c * (n - i) as f64).collect()
}

fn horner(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gaussian_int;

    fn form(cs: &[i64]) -> Vec<GaussianRational> {
        cs.iter().map(|&c| gaussian_int(c, 0)).collect()
    }

    #[test]
    fn named_forms() {
        let cases: &[(&[i64], BruteForceKind)] = &[
            (&[0, 1, 0], BruteForceKind::Closed),
            (&[1, 0, 0], BruteForceKind::NullCone),
            (&[0, 1, 0, 0, 0], BruteForceKind::NullCone),
            (&[0, 1, 1, 0, 0], BruteForceKind::SemistableNotClosed),
            (&[1, 0, 1], BruteForceKind::Closed),
            (&[1, 0, 0, 0, 1], BruteForceKind::Closed),
        ];
        for (cs, kind) in cases {
            let d = cs.len() - 1;
            let v = sl2_brute_force_oracle(d, &form(cs), 7).unwrap();
            assert_eq!(v.kind, *kind, "form {cs:?}");
        }
    }

    #[test]
    fn frames_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_frame(&mut rng);
        let gram = |i: usize, j: usize| u[0][i] * u[0][j].conj() + u[1][i] * u[1][j].conj();
        assert!((gram(0, 0) - 1.0).norm() < 1e-14);
        assert!(gram(0, 1).norm() < 1e-14);
    }

    #[test]
    fn multiple_root_refinement() {
        // (x - 1/3)^3 (x + 2)
        let rho = Complex64::new(1.0 / 3.0, 0.0);
        let mut p = vec![Complex64::new(1.0, 0.0)];
        for r in [rho, rho, rho, Complex64::new(-2.0, 0.0)] {
            let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * r;
            }
            p = next;
        }
        let refined = refine_multiple_root(&p, rho + 1e-4, 3);
        assert!((refined - rho).norm() < 1e-14);
    }
}
