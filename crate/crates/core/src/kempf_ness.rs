//! Descent of `||g v||^2` along the orbit and the resulting closedness verdict.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hilbert_mumford::{
    sl2_form_oracle, support_weights, torus_orbit_oracle, verdict_for_support, OnePS, TorusCertificate, TorusKind,
};
use crate::linalg::{hermitian_inner, ComplexVector};
use crate::moment::{moment_map, MomentValue};
use crate::representation::{Family, LieElement, Representation};
use crate::{ExactVector, FloatVector};

/// Smallest normalized trial step `t · F` before the line search gives up.
pub const MIN_STEP: f64 = 1e-16;
/// Relative zero test for supports of floating vectors.
pub const SUPPORT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KNOptions {
    /// Stop when `||μ(v_k)||_Q ≤ tol_mu · ||v_k||^2`.
    pub tol_mu: f64,
    /// Collapse when `||v_k|| ≤ tol_null · ||v_0||`.
    pub tol_null: f64,
    pub max_iters: usize,
    pub armijo_c: f64,
    pub backtrack_factor: f64,
    /// Bound on each step: at most `initial_step / ||v_k||^2` times `μ^♯`
    /// in size, and at most `initial_step` in operator norm.
    pub initial_step: f64,
    /// Precondition the descent direction with the Hessian of the norm.
    pub preconditioned: bool,
}

impl Default for KNOptions {
    fn default() -> Self {
        Self {
            tol_mu: 1e-8,
            tol_null: 1e-10,
            max_iters: 10_000,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            initial_step: 1.0,
            preconditioned: true,
        }
    }
}

impl KNOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tol_mu > 0.0
            && self.tol_null > 0.0
            && self.initial_step > 0.0
            && self.backtrack_factor > 0.0
            && self.backtrack_factor < 1.0
            && self.armijo_c > 0.0
            && self.armijo_c < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Format(format!("invalid descent options {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TerminalReason {
    MuBelowTol,
    NullCollapse,
    MaxIters,
    StepUnderflow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub v: FloatVector,
    /// `F_k = ||v_k||^2`.
    pub value: f64,
    pub mu_norm: f64,
    /// Step taken from this iterate; zero at the last one.
    pub step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KNTrajectory {
    pub iterates: Vec<Iterate>,
    pub terminal_reason: TerminalReason,
}

impl KNTrajectory {
    pub fn last(&self) -> &Iterate {
        self.iterates.last().expect("trajectory has a starting point")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Closed,
    NullCone,
    NotClosed,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictSource {
    Numeric,
    ExactOracle,
    Both,
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Witness {
    MuZeroPoint(FloatVector),
    CollapseTrajectory(KNTrajectory),
    DestabilizingOnePS(OnePS),
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitVerdict {
    pub kind: VerdictKind,
    pub witness: Witness,
    pub source: VerdictSource,
    /// The descent run behind the numeric part of the verdict.
    pub trajectory: Option<KNTrajectory>,
}

/// `||exp(p) v||^2` for a hermitian element `p`.
pub fn kn_value(rep: &Representation, p: &LieElement, v: &FloatVector) -> Result<f64> {
    check_dim(rep.dim(), v.dim())?;
    check_dim(rep.algebra_dim(), p.len())?;
    if !p.is_hermitian() {
        return Err(Error::Format("orbit norm functional needs a hermitian element".into()));
    }
    if let Some(t) = rep.as_torus() {
        return Ok(v.iter().enumerate().map(|(i, z)| (2.0 * t.pairing(i, &p.hermitian)).exp() * z.norm_sqr()).sum());
    }
    Ok(rep.act_group(p, v)?.norm_sqr())
}

/// Hessian eigenvalues below this fraction of the largest are treated as zero.
const HESSIAN_CUTOFF: f64 = 1e-10;
/// Curvature tolerance of the line search: accept `|φ'(t)| ≤ WOLFE_SIGMA · |φ'(0)|`.
const WOLFE_SIGMA: f64 = 0.25;
const MAX_ZOOM: usize = 60;

/// A trial point on the curve `t ↦ exp(i t ξ) v`.
struct Trial {
    t: f64,
    next: FloatVector,
    /// `F(next) - F(v)`.
    change: f64,
    /// `φ'(t) = -4⟨μ(next), ξ⟩`.
    slope: f64,
}

fn trial(rep: &Representation, v: &FloatVector, sharp: &[f64], t: f64) -> Result<Trial> {
    // exp(i t ξ) has hermitian coordinates -t ξ.
    let p = LieElement::hermitian(sharp.iter().map(|x| -t * x).collect());
    let delta = rep.act_group_increment(&p, v)?;
    // F(next) - F(v) = 2 Re(δ, v) + ||δ||^2, free of cancellation.
    let change = 2.0 * hermitian_inner(&delta, v)?.re + delta.norm_sqr();
    let next = v.add(&delta)?;
    let slope = -4.0 * moment_map(rep, &next)?.pair(sharp);
    Ok(Trial { t, next, change, slope })
}

/// Largest step: `t ≤ initial_step / ||v||^2` and `t · ||μ^♯||_op ≤ initial_step`,
/// so no coordinate changes by more than a factor `e^{initial_step}` at once.
fn step_cap(rep: &Representation, sharp: &[f64], f: f64, initial_step: f64) -> Result<f64> {
    let op_norm = match rep.as_torus() {
        Some(t) => (0..t.dim()).map(|i| t.pairing(i, sharp).abs()).fold(0.0, f64::max),
        None => rep.compact_operator(sharp)?.norm_operator(),
    };
    Ok((initial_step / f).min(initial_step / op_norm))
}

/// One descent step along `exp(i t μ(v)^♯) v`.
///
/// The step is capped by [`step_cap`]. Within the cap it satisfies the
/// Armijo condition `F(v_next) ≤ F(v) - armijo_c · t · 4||μ(v)||_Q^2` and,
/// unless the cap is taken, a curvature condition found by bracketing the
/// zero of the (monotone) derivative along the curve.
pub fn kn_step(rep: &Representation, v: &FloatVector, options: &KNOptions) -> Result<(FloatVector, f64)> {
    options.validate()?;
    let mu = moment_map(rep, v)?;
    line_search(rep, v, &mu, options)
}

fn line_search(
    rep: &Representation,
    v: &FloatVector,
    mu: &MomentValue,
    options: &KNOptions,
) -> Result<(FloatVector, f64)> {
    let slope = 4.0 * mu.norm_sqr();
    let f = v.norm_sqr();
    if slope == 0.0 || f == 0.0 {
        return Ok((v.clone(), 0.0));
    }
    let sharp = mu.sharp();
    let armijo = |x: &Trial| x.change <= -options.armijo_c * x.t * slope;

    let cap = step_cap(rep, &sharp, f, options.initial_step)?;
    let first = trial(rep, v, &sharp, cap)?;
    if armijo(&first) && first.slope <= WOLFE_SIGMA * slope {
        return Ok((first.next, first.t));
    }
    let (mut lo_t, mut lo_slope, mut lo_change) = (0.0, -slope, 0.0);
    let mut lo_next: Option<FloatVector> = None;
    let (mut hi_t, mut hi_slope) = (first.t, armijo(&first).then_some(first.slope));
    if hi_slope.is_some_and(|s| s < 0.0) {
        // Armijo holds but the curve is still descending at the cap.
        return Ok((first.next, first.t));
    }
    for _ in 0..MAX_ZOOM {
        if (hi_t - lo_t) * f < MIN_STEP {
            break;
        }
        let t = match hi_slope {
            Some(hs) if hs > lo_slope => {
                let secant = lo_t + (hi_t - lo_t) * (-lo_slope) / (hs - lo_slope);
                let margin = 0.1 * (hi_t - lo_t);
                secant.clamp(lo_t + margin, hi_t - margin)
            }
            _ => lo_t + options.backtrack_factor * (hi_t - lo_t),
        };
        let x = trial(rep, v, &sharp, t)?;
        if !armijo(&x) || x.change >= lo_change {
            hi_t = t;
            hi_slope = None;
        } else if x.slope.abs() <= WOLFE_SIGMA * slope {
            return Ok((x.next, t));
        } else if x.slope > 0.0 {
            hi_t = t;
            hi_slope = Some(x.slope);
        } else {
            lo_t = t;
            lo_slope = x.slope;
            lo_change = x.change;
            lo_next = Some(x.next);
        }
    }
    match lo_next {
        Some(next) => Ok((next, lo_t)),
        None => Err(Error::StepUnderflow { min_step: hi_t }),
    }
}

/// Hessian of `h ↦ ||exp(Σ h_j H_j) v||^2` at `h = 0`: `4 Re(H_j v, H_k v)`.
pub fn kn_hessian(rep: &Representation, v: &FloatVector) -> Result<DMatrix<f64>> {
    let m = rep.algebra_dim();
    let moved: Vec<FloatVector> = (0..m)
        .map(|j| {
            let mut h = vec![0.0; m];
            h[j] = 1.0;
            rep.act_lie(&LieElement::hermitian(h), v)
        })
        .collect::<Result<_>>()?;
    let mut hess = DMatrix::zeros(m, m);
    for j in 0..m {
        for k in j..m {
            let value = 4.0 * hermitian_inner(&moved[j], &moved[k])?.re;
            hess[(j, k)] = value;
            hess[(k, j)] = value;
        }
    }
    Ok(hess)
}

/// Descent step along the Hessian-preconditioned direction `d = -H^+ g`,
/// `g = 4μ(v)`, with the same movement bounds as [`kn_step`]:
/// `||t d||_Q ≤ initial_step · ||μ^♯||_Q / ||v||^2` and `||t d||_op ≤ initial_step`.
pub fn kn_newton_step(rep: &Representation, v: &FloatVector, options: &KNOptions) -> Result<(FloatVector, f64)> {
    options.validate()?;
    let mu = moment_map(rep, v)?;
    newton_search(rep, v, &mu, options)
}

fn newton_search(
    rep: &Representation,
    v: &FloatVector,
    mu: &MomentValue,
    options: &KNOptions,
) -> Result<(FloatVector, f64)> {
    let f = v.norm_sqr();
    let grad = DVector::from_iterator(mu.coords().len(), mu.coords().iter().map(|c| 4.0 * c));
    if f == 0.0 || grad.iter().all(|g| *g == 0.0) {
        return Ok((v.clone(), 0.0));
    }
    let hess = kn_hessian(rep, v)?;
    let eig = SymmetricEigen::new(hess);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let mut dir = DVector::zeros(grad.len());
    for (k, lambda) in eig.eigenvalues.iter().enumerate() {
        if *lambda > HESSIAN_CUTOFF * top {
            let u = eig.eigenvectors.column(k);
            dir -= u * (u.dot(&grad) / lambda);
        }
    }
    let slope = grad.dot(&dir);
    if slope >= 0.0 {
        return Ok((v.clone(), 0.0));
    }
    let q = mu.inner_product();
    let dir_q = (dir.transpose() * q * &dir)[(0, 0)].max(0.0).sqrt();
    let dir_op = match rep.as_torus() {
        Some(t) => (0..t.dim()).map(|i| t.pairing(i, dir.as_slice()).abs()).fold(0.0, f64::max),
        None => rep.compact_operator(dir.as_slice())?.norm_operator(),
    };
    let mut t = 1f64.min(options.initial_step * mu.norm() / (f * dir_q)).min(options.initial_step / dir_op);
    loop {
        let p = LieElement::hermitian(dir.iter().map(|x| t * x).collect());
        let delta = rep.act_group_increment(&p, v)?;
        let change = 2.0 * hermitian_inner(&delta, v)?.re + delta.norm_sqr();
        if change <= options.armijo_c * t * slope {
            return Ok((v.add(&delta)?, t));
        }
        t *= options.backtrack_factor;
        if t * dir_q < MIN_STEP {
            return Err(Error::StepUnderflow { min_step: t });
        }
    }
}

/// Run the descent from `v` (orthonormal coordinates) until a stopping rule fires.
pub fn descend(rep: &Representation, v: &FloatVector, options: &KNOptions) -> Result<KNTrajectory> {
    options.validate()?;
    check_dim(rep.dim(), v.dim())?;
    let start_norm = v.norm();
    let mut iterates = Vec::new();
    let mut current = v.clone();
    for _ in 0..=options.max_iters {
        let value = current.norm_sqr();
        let mu = moment_map(rep, &current)?;
        let mu_norm = mu.norm();
        let reason = if current.norm() <= options.tol_null * start_norm {
            Some(TerminalReason::NullCollapse)
        } else if mu_norm <= options.tol_mu * value {
            Some(TerminalReason::MuBelowTol)
        } else if iterates.len() == options.max_iters {
            Some(TerminalReason::MaxIters)
        } else {
            None
        };
        if let Some(terminal_reason) = reason {
            iterates.push(Iterate { v: current, value, mu_norm, step: 0.0 });
            return Ok(KNTrajectory { iterates, terminal_reason });
        }
        let step = if options.preconditioned {
            newton_search(rep, &current, &mu, options)
        } else {
            line_search(rep, &current, &mu, options)
        };
        match step {
            Ok((next, step)) => {
                iterates.push(Iterate { v: current, value, mu_norm, step });
                current = next;
            }
            Err(Error::StepUnderflow { .. }) => {
                iterates.push(Iterate { v: current, value, mu_norm, step: 0.0 });
                return Ok(KNTrajectory { iterates, terminal_reason: TerminalReason::StepUnderflow });
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns by the iteration budget")
}

/// Exact verdict with its witness, if the family has an oracle.
type OracleVerdict = (TorusKind, Option<OnePS>);

fn oracle_from_torus(kind: TorusKind, certificate: TorusCertificate) -> OracleVerdict {
    let witness = match certificate {
        TorusCertificate::Cocharacter(lambda) => Some(OnePS::Torus { lambda }),
        TorusCertificate::Balanced { .. } => None,
    };
    (kind, witness)
}

fn exact_oracle(rep: &Representation, v: &ExactVector) -> Result<Option<OracleVerdict>> {
    Ok(match rep.family() {
        Family::Torus(t) => {
            let verdict = torus_orbit_oracle(t, v)?;
            Some(oracle_from_torus(verdict.kind, verdict.certificate))
        }
        Family::BinaryForm(b) => {
            let verdict = sl2_form_oracle(b.degree(), v.entries())?;
            Some((verdict.kind, verdict.witness))
        }
        Family::Custom(_) => None,
    })
}

/// Classify the orbit of an exact vector given in user coordinates.
pub fn classify_orbit(rep: &Representation, v: &ExactVector, options: &KNOptions) -> Result<OrbitVerdict> {
    check_dim(rep.dim(), v.dim())?;
    let oracle = exact_oracle(rep, v)?;
    classify_with(rep, &rep.embed(v)?, options, oracle)
}

/// Classify the orbit of a floating vector in orthonormal coordinates.
///
/// Tori use the exact oracle on the numerically detected support; other
/// families have no oracle for inexact input.
pub fn classify_orbit_float(rep: &Representation, v: &FloatVector, options: &KNOptions) -> Result<OrbitVerdict> {
    check_dim(rep.dim(), v.dim())?;
    let oracle = match rep.as_torus() {
        Some(t) => {
            let verdict = verdict_for_support(&support_weights(t, v, SUPPORT_TOL)?)?;
            Some(oracle_from_torus(verdict.kind, verdict.certificate))
        }
        None => None,
    };
    classify_with(rep, v, options, oracle)
}

fn kind_name(kind: TorusKind) -> &'static str {
    match kind {
        TorusKind::Closed => "Closed",
        TorusKind::SemistableNotClosed => "SemistableNotClosed",
        TorusKind::NullCone => "NullCone",
    }
}

fn classify_with(
    rep: &Representation,
    v: &FloatVector,
    options: &KNOptions,
    oracle: Option<OracleVerdict>,
) -> Result<OrbitVerdict> {
    options.validate()?;
    if v.is_zero() {
        let source = if oracle.is_some() { VerdictSource::Both } else { VerdictSource::Numeric };
        if let Some((kind, _)) = &oracle {
            if *kind != TorusKind::Closed {
                return Err(Error::OracleMismatch { numeric: "Closed".into(), oracle: kind_name(*kind).into() });
            }
        }
        return Ok(OrbitVerdict {
            kind: VerdictKind::Closed,
            witness: Witness::MuZeroPoint(v.clone()),
            source,
            trajectory: None,
        });
    }
    let trajectory = descend(rep, v, options)?;
    let numeric = match trajectory.terminal_reason {
        TerminalReason::MuBelowTol => Some(TorusKind::Closed),
        TerminalReason::NullCollapse => Some(TorusKind::NullCone),
        TerminalReason::MaxIters | TerminalReason::StepUnderflow => None,
    };
    let numeric_witness = |kind: TorusKind, trajectory: &KNTrajectory| match kind {
        TorusKind::Closed => Witness::MuZeroPoint(trajectory.last().v.clone()),
        _ => Witness::CollapseTrajectory(trajectory.clone()),
    };
    let to_kind = |kind: TorusKind| match kind {
        TorusKind::Closed => VerdictKind::Closed,
        TorusKind::NullCone => VerdictKind::NullCone,
        TorusKind::SemistableNotClosed => VerdictKind::NotClosed,
    };
    let verdict = match (numeric, oracle) {
        (Some(n), Some((o, _))) if n != o => {
            return Err(Error::OracleMismatch { numeric: kind_name(n).into(), oracle: kind_name(o).into() })
        }
        (Some(n), Some(_)) => OrbitVerdict {
            kind: to_kind(n),
            witness: numeric_witness(n, &trajectory),
            source: VerdictSource::Both,
            trajectory: None,
        },
        (Some(n), None) => OrbitVerdict {
            kind: to_kind(n),
            witness: numeric_witness(n, &trajectory),
            source: VerdictSource::Numeric,
            trajectory: None,
        },
        (None, Some((o, witness))) => OrbitVerdict {
            kind: to_kind(o),
            witness: witness.map(Witness::DestabilizingOnePS).unwrap_or(Witness::None),
            source: VerdictSource::ExactOracle,
            trajectory: None,
        },
        (None, None) => OrbitVerdict {
            kind: VerdictKind::Inconclusive,
            witness: Witness::None,
            source: VerdictSource::Numeric,
            trajectory: None,
        },
    };
    Ok(OrbitVerdict { trajectory: Some(trajectory), ..verdict })
}

/// Exact rational vector from integer pairs, for tests and examples.
pub fn exact_from_ints(parts: &[(i64, i64)]) -> ExactVector {
    ComplexVector::new(
        parts
            .iter()
            .map(|&(a, b)| {
                num_complex::Complex::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
            })
            .collect(),
    )
}
