//! Stabilizer, fixed-point and sampling checks built on the moment map.
//!
//! Subgroups are given by compact generators in the coordinates of the
//! ambient compact basis `ξ_1, …, ξ_m`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::hilbert_mumford::{support_weights, verdict_for_support, TorusKind};
use crate::kempf_ness::{classify_orbit_float, KNOptions, VerdictKind, SUPPORT_TOL};
use crate::linalg::{complex_kernel_below, complex_span, real_kernel, real_kernel_below};
use crate::moment::{moment_map, pairing_with_operator, symplectic_form, MomentValue};
use crate::representation::{CustomRep, LieElement, Representation, TorusRep};
use crate::{ExactVector, FloatMatrix, FloatVector};

/// Relative cut for kernels and spans in the subgroup checks.
pub const KERNEL_TOL: f64 = 1e-9;
/// Relative cut for stabilizers at approximate moment-map zeros.
pub const STABILIZER_TOL: f64 = 1e-6;
/// Relative residual allowed for a vector to count as fixed.
pub const FIXED_TOL: f64 = 1e-10;
/// Least-squares residual allowed when a subgenerator is given as a matrix.
pub const SUBGENERATOR_TOL: f64 = 1e-10;
pub const LUNA_PAIRING_TOL: f64 = 1e-9;
pub const LUNA_MOMENT_TOL: f64 = 1e-10;
pub const TANGENT_TOL: f64 = 1e-8;
/// Normalized moment-map size allowed at a sampler base point.
pub const BASE_POINT_TOL: f64 = 1e-8;
/// Samples per independently seeded shard.
pub const SHARD_SIZE: usize = 32;

fn unit(m: usize, j: usize) -> Vec<f64> {
    let mut e = vec![0.0; m];
    e[j] = 1.0;
    e
}

fn generator_scale(rep: &Representation) -> f64 {
    rep.generators().iter().map(|g| g.norm_frobenius()).fold(0.0, f64::max)
}

fn compact_images(rep: &Representation, v: &FloatVector) -> Result<Vec<FloatVector>> {
    let m = rep.algebra_dim();
    (0..m).map(|j| rep.act_lie(&LieElement::compact(unit(m, j)), v)).collect()
}

/// Columns of a real matrix as coordinate vectors.
fn columns(basis: &DMatrix<f64>) -> Vec<Vec<f64>> {
    basis.column_iter().map(|c| c.iter().cloned().collect()).collect()
}

/// Kernel of `(c, h) ↦ (Σ c_j ξ_j + i Σ h_j ξ_j) v` on `R^{2m}`, with its complex dimension.
pub fn stabilizer_algebra_complex(rep: &Representation, v: &FloatVector, tol: f64) -> Result<(DMatrix<f64>, usize)> {
    check_dim(rep.dim(), v.dim())?;
    let (n, m) = (rep.dim(), rep.algebra_dim());
    let images = compact_images(rep, v)?;
    let i = Complex64::new(0.0, 1.0);
    let a = DMatrix::from_fn(2 * n, 2 * m, |r, c| {
        let z = images[c % m][r % n];
        let z = if c >= m { z * i } else { z };
        if r < n {
            z.re
        } else {
            z.im
        }
    });
    let basis = real_kernel_below(&a, tol * v.norm() * generator_scale(rep));
    let k = basis.ncols();
    if !k.is_multiple_of(2) {
        return Err(Error::OddKernelDimension(k));
    }
    Ok((basis, k / 2))
}

/// Kernel of `c ↦ (Σ c_j ξ_j) v` on `R^m`, with its real dimension.
pub fn stabilizer_algebra_compact(rep: &Representation, v: &FloatVector, tol: f64) -> Result<(DMatrix<f64>, usize)> {
    check_dim(rep.dim(), v.dim())?;
    let (n, m) = (rep.dim(), rep.algebra_dim());
    let images = compact_images(rep, v)?;
    let a = DMatrix::from_fn(2 * n, m, |r, c| {
        let z = images[c][r % n];
        if r < n {
            z.re
        } else {
            z.im
        }
    });
    let basis = real_kernel_below(&a, tol * v.norm() * generator_scale(rep));
    let k = basis.ncols();
    Ok((basis, k))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizerReport {
    pub dim_c_gv: usize,
    pub dim_r_kv: usize,
    pub mu_norm: f64,
    pub real_form_holds: bool,
}

/// Compare `dim_R 𝔨_v` with `dim_C 𝔤_v`.
pub fn matsushima_check(rep: &Representation, v: &FloatVector, tol: f64) -> Result<StabilizerReport> {
    let (_, dim_c_gv) = stabilizer_algebra_complex(rep, v, tol)?;
    let (_, dim_r_kv) = stabilizer_algebra_compact(rep, v, tol)?;
    let mu_norm = moment_map(rep, v)?.norm();
    Ok(StabilizerReport { dim_c_gv, dim_r_kv, mu_norm, real_form_holds: dim_c_gv == dim_r_kv })
}

/// `max |ω(ξ_a v, ξ_b v)|` over pairs of compact generators.
pub fn isotropic_check(rep: &Representation, v: &FloatVector) -> Result<f64> {
    let images = compact_images(rep, v)?;
    let mut worst: f64 = 0.0;
    for (a, u) in images.iter().enumerate() {
        for w in &images[a + 1..] {
            worst = worst.max(symplectic_form(u, w)?.abs());
        }
    }
    Ok(worst)
}

/// A compact generator of a subgroup.
#[derive(Clone, Debug, PartialEq)]
pub enum Subgenerator {
    /// One of the ambient compact generators.
    Index(usize),
    /// Real coordinates in the ambient compact basis.
    Coords(Vec<f64>),
    /// Skew-hermitian matrix acting on `V`, fitted to the ambient basis.
    Matrix(FloatMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupData {
    subalgebra: Vec<Vec<f64>>,
    normalizer: Vec<Vec<f64>>,
}

impl SubgroupData {
    /// Without explicit generators the normalizer algebra is computed from the subalgebra.
    pub fn new(rep: &Representation, subalgebra: &[Subgenerator], normalizer: Option<&[Subgenerator]>) -> Result<Self> {
        let subalgebra: Vec<Vec<f64>> = subalgebra.iter().map(|g| resolve(rep, g)).collect::<Result<_>>()?;
        let normalizer = match normalizer {
            Some(gens) => gens.iter().map(|g| resolve(rep, g)).collect::<Result<_>>()?,
            None => normalizer_algebra(rep, &subalgebra)?,
        };
        let mut joined = normalizer.clone();
        joined.extend(subalgebra.iter().cloned());
        if real_rank(rep.algebra_dim(), &joined) != real_rank(rep.algebra_dim(), &normalizer) {
            return Err(Error::InvalidRepresentation(
                "subgroup algebra is not contained in the normalizer algebra".into(),
            ));
        }
        Ok(Self { subalgebra, normalizer })
    }

    /// Real basis of the compact form of `H`.
    pub fn subalgebra(&self) -> &[Vec<f64>] {
        &self.subalgebra
    }

    /// Real basis of the compact form of `N_G(H)`.
    pub fn normalizer(&self) -> &[Vec<f64>] {
        &self.normalizer
    }
}

fn resolve(rep: &Representation, g: &Subgenerator) -> Result<Vec<f64>> {
    let m = rep.algebra_dim();
    match g {
        Subgenerator::Index(j) if *j < m => Ok(unit(m, *j)),
        Subgenerator::Index(j) => Err(Error::InvalidRepresentation(format!("generator index {j} out of range 0..{m}"))),
        Subgenerator::Coords(c) => {
            check_dim(m, c.len())?;
            Ok(c.clone())
        }
        Subgenerator::Matrix(mat) => {
            check_dim(rep.dim(), mat.rows())?;
            check_dim(rep.dim(), mat.cols())?;
            let (coords, residual) = rep.project_operator(mat);
            if residual > SUBGENERATOR_TOL * mat.norm_frobenius().max(1.0) {
                return Err(Error::InvalidRepresentation(format!(
                    "subgenerator is not in the span of the compact generators (residual {residual:e})"
                )));
            }
            Ok(coords)
        }
    }
}

fn as_matrix(m: usize, vectors: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(m, vectors.len(), |i, j| vectors[j][i])
}

fn real_rank(m: usize, vectors: &[Vec<f64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let b = as_matrix(m, vectors);
    let sv = b.svd(false, false).singular_values;
    let largest = sv.max();
    sv.iter().filter(|s| **s > KERNEL_TOL * largest).count()
}

/// Real kernel of vertically stacked `m`-column blocks; all of `R^m` when there are none.
fn joint_kernel(m: usize, blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    if blocks.is_empty() {
        return DMatrix::identity(m, m);
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = DMatrix::zeros(rows, m);
    let mut r = 0;
    for b in blocks {
        stacked.rows_mut(r, b.nrows()).copy_from(b);
        r += b.nrows();
    }
    real_kernel(&stacked, KERNEL_TOL)
}

/// `{ξ ∈ 𝔨 : [ξ, η] = 0}` for every subgenerator `η`.
pub fn centralizer(rep: &Representation, subalgebra: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let blocks: Vec<DMatrix<f64>> = subalgebra.iter().map(|eta| rep.ad_matrix(eta)).collect::<Result<_>>()?;
    Ok(columns(&joint_kernel(rep.algebra_dim(), &blocks)))
}

/// `{ξ ∈ 𝔨 : [ξ, η] ∈ 𝔨_2}` for every subgenerator `η`.
pub fn normalizer_algebra(rep: &Representation, subalgebra: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let m = rep.algebra_dim();
    let off = if subalgebra.is_empty() {
        DMatrix::identity(m, m)
    } else {
        let svd = as_matrix(m, subalgebra).svd(true, false);
        let u = svd.u.expect("requested U");
        let largest = svd.singular_values.max();
        let mut projector = DMatrix::identity(m, m);
        for (k, s) in svd.singular_values.iter().enumerate() {
            if *s > KERNEL_TOL * largest {
                projector -= u.column(k) * u.column(k).transpose();
            }
        }
        projector
    };
    let blocks: Vec<DMatrix<f64>> =
        subalgebra.iter().map(|eta| Ok(&off * rep.ad_matrix(eta)?)).collect::<Result<_>>()?;
    Ok(columns(&joint_kernel(m, &blocks)))
}

/// Basis of the `Q`-orthogonal complement of `span(basis)` in `𝔨`.
pub fn q_complement(rep: &Representation, basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = rep.algebra_dim();
    if basis.is_empty() {
        return columns(&DMatrix::identity(m, m));
    }
    let constraints = as_matrix(m, basis).transpose() * rep.inner_product();
    columns(&real_kernel(&constraints, KERNEL_TOL))
}

fn subgroup_operators(rep: &Representation, subalgebra: &[Vec<f64>]) -> Result<Vec<FloatMatrix>> {
    subalgebra.iter().map(|c| rep.compact_operator(c)).collect()
}

/// Orthonormal basis (columns) of the joint kernel of the subgroup generators on `V`.
pub fn fixed_subspace(rep: &Representation, h: &SubgroupData, tol: f64) -> Result<DMatrix<Complex64>> {
    let n = rep.dim();
    let ops = subgroup_operators(rep, h.subalgebra())?;
    if ops.is_empty() {
        return Ok(DMatrix::identity(n, n));
    }
    let stacked = DMatrix::from_fn(n * ops.len(), n, |r, c| *ops[r / n].get(r % n, c));
    let scale = ops.iter().map(|o| o.norm_frobenius()).fold(0.0, f64::max);
    Ok(complex_kernel_below(&stacked, tol * scale))
}

fn check_fixed(rep: &Representation, h: &SubgroupData, v: &FloatVector) -> Result<()> {
    check_dim(rep.dim(), v.dim())?;
    let norm = v.norm();
    let mut worst: f64 = 0.0;
    for op in subgroup_operators(rep, h.subalgebra())? {
        let scale = op.norm_frobenius() * norm;
        if scale > 0.0 {
            worst = worst.max(op.mul_vec(v)?.norm() / scale);
        }
    }
    if worst > FIXED_TOL {
        return Err(Error::NotFixed { residual: worst });
    }
    Ok(())
}

/// Moment map of the subgroup with compact basis `basis`: the `Q`-orthogonal
/// projection of `μ(v)^♯` onto `span(basis)`, as pairings against `basis`.
pub fn restricted_moment(rep: &Representation, basis: &[Vec<f64>], v: &FloatVector) -> Result<MomentValue> {
    let m = rep.algebra_dim();
    for b in basis {
        check_dim(m, b.len())?;
    }
    let b = as_matrix(m, basis);
    let gram = b.transpose() * rep.inner_product() * &b;
    if basis.is_empty() {
        return MomentValue::new(Vec::new(), gram);
    }
    let sharp = DVector::from_vec(moment_map(rep, v)?.sharp());
    let gram_inv = gram
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidRepresentation("subgroup generators are linearly dependent".into()))?;
    let coeffs = &gram_inv * (b.transpose() * rep.inner_product() * sharp);
    let pairings = &gram * coeffs;
    MomentValue::new(pairings.iter().cloned().collect(), gram)
}

/// Same pairings evaluated directly from the defining formula.
pub fn restricted_moment_direct(rep: &Representation, basis: &[Vec<f64>], v: &FloatVector) -> Result<Vec<f64>> {
    basis.iter().map(|c| pairing_with_operator(&rep.compact_operator(c)?, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LunaRestrictionReport {
    pub fixed_dim: usize,
    pub centralizer_dim: usize,
    /// Largest `|⟨μ(v), ξ⟩|` over a unit basis of the complement of the centralizer.
    pub complement_max_pairing: f64,
    /// Largest difference between the moment map of the normalizer on `V^H`
    /// and the projection of `μ(v)`.
    pub restricted_residual: f64,
}

impl LunaRestrictionReport {
    pub fn passes(&self) -> bool {
        self.complement_max_pairing <= LUNA_PAIRING_TOL && self.restricted_residual <= LUNA_MOMENT_TOL
    }
}

pub fn luna_restriction_check(
    rep: &Representation,
    h: &SubgroupData,
    v: &FloatVector,
) -> Result<LunaRestrictionReport> {
    check_fixed(rep, h, v)?;
    let cent = centralizer(rep, h.subalgebra())?;
    let mu = moment_map(rep, v)?;
    let complement_max_pairing = q_complement(rep, &cent).iter().map(|xi| mu.pair(xi).abs()).fold(0.0, f64::max);

    let fixed = fixed_subspace(rep, h, KERNEL_TOL)?;
    let adjoint = fixed.adjoint();
    let u: FloatVector = (&adjoint * DVector::from_iterator(v.dim(), v.iter().cloned())).iter().cloned().collect();
    let mut on_fixed = Vec::with_capacity(h.normalizer().len());
    for xi in h.normalizer() {
        let op = rep.compact_operator(xi)?.to_nalgebra();
        let restricted = FloatMatrix::from_nalgebra(&(&adjoint * op * &fixed));
        on_fixed.push(pairing_with_operator(&restricted, &u)?);
    }
    let projected = restricted_moment(rep, h.normalizer(), v)?;
    let restricted_residual = on_fixed.iter().zip(projected.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(LunaRestrictionReport {
        fixed_dim: fixed.ncols(),
        centralizer_dim: cent.len(),
        complement_max_pairing,
        restricted_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentReport {
    /// `dim (𝔤·y)^H`.
    pub dim_s1: usize,
    /// `dim 𝔤^H·y`.
    pub dim_s2: usize,
    /// Largest distance from a unit vector of `S₂` to `S₁`.
    pub containment_residual: f64,
}

impl TangentReport {
    pub fn passes(&self) -> bool {
        self.dim_s1 == self.dim_s2 && self.containment_residual <= TANGENT_TOL
    }
}

pub fn luna_tangent_check(rep: &Representation, h: &SubgroupData, y: &FloatVector) -> Result<TangentReport> {
    check_fixed(rep, h, y)?;
    let n = rep.dim();
    let scale = y.norm() * generator_scale(rep);
    let tangent = complex_span(&compact_images(rep, y)?, n, KERNEL_TOL, scale);

    let ops = subgroup_operators(rep, h.subalgebra())?;
    let s1 = if ops.is_empty() || tangent.ncols() == 0 {
        tangent.clone()
    } else {
        let p = tangent.ncols();
        let images: Vec<DMatrix<Complex64>> = ops.iter().map(|o| o.to_nalgebra() * &tangent).collect();
        let stacked = DMatrix::from_fn(n * ops.len(), p, |r, c| images[r / n][(r % n, c)]);
        let op_scale = ops.iter().map(|o| o.norm_frobenius()).fold(0.0, f64::max);
        let kernel = complex_kernel_below(&stacked, KERNEL_TOL * op_scale);
        &tangent * kernel
    };

    let centralizing: Vec<FloatVector> = centralizer(rep, h.subalgebra())?
        .into_iter()
        .map(|xi| rep.act_lie(&LieElement::compact(xi), y))
        .collect::<Result<_>>()?;
    let s2 = complex_span(&centralizing, n, KERNEL_TOL, scale);

    let mut containment_residual: f64 = 0.0;
    for col in s2.column_iter() {
        let along = &s1 * (s1.adjoint() * col);
        containment_residual = containment_residual.max((col - along).norm());
    }
    Ok(TangentReport { dim_s1: s1.ncols(), dim_s2: s2.ncols(), containment_residual })
}

/// How the sampler classifies orbits of the subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SubgroupMethod {
    /// Generators are diagonal with integer weights: exact support oracle.
    TorusOracle,
    /// Descent flow of the subgroup acting alone.
    DescentFlow,
}

enum SubgroupClassifier {
    Trivial,
    Torus(TorusRep),
    Flow(Box<Representation>),
}

impl SubgroupClassifier {
    fn new(rep: &Representation, subalgebra: &[Vec<f64>]) -> Result<Self> {
        let ops = subgroup_operators(rep, subalgebra)?;
        if ops.is_empty() {
            return Ok(Self::Trivial);
        }
        let n = rep.dim();
        let weight = |op: &FloatMatrix, i: usize| -> Option<i64> {
            let z = op.get(i, i);
            let w = z.im.round();
            (z.re.abs() <= 1e-12 && (z.im - w).abs() <= 1e-9).then_some(w as i64)
        };
        let diagonal = ops.iter().all(|op| (0..n).all(|i| (0..n).all(|j| i == j || op.get(i, j).norm() <= 1e-12)));
        if diagonal {
            let weights: Option<Vec<Vec<i64>>> = (0..n).map(|i| ops.iter().map(|op| weight(op, i)).collect()).collect();
            if let Some(weights) = weights {
                return Ok(Self::Torus(TorusRep::new(weights)?));
            }
        }
        Ok(Self::Flow(Box::new(Representation::custom(CustomRep::new(n, ops, Some("subgroup".into()))?)?)))
    }

    fn method(&self) -> SubgroupMethod {
        match self {
            Self::Flow(_) => SubgroupMethod::DescentFlow,
            _ => SubgroupMethod::TorusOracle,
        }
    }

    /// Verdict for a vector in orthonormal coordinates.
    fn classify(&self, v: &FloatVector, options: &KNOptions) -> Result<VerdictKind> {
        match self {
            Self::Trivial => Ok(VerdictKind::Closed),
            Self::Torus(t) => Ok(torus_kind(verdict_for_support(&support_weights(t, v, SUPPORT_TOL)?)?.kind)),
            Self::Flow(r) => Ok(classify_orbit_float(r, v, options)?.kind),
        }
    }

    /// Exact verdict on user coordinates when the subgroup is a torus.
    fn classify_exact(&self, rep: &Representation, v: &ExactVector, options: &KNOptions) -> Result<VerdictKind> {
        match self {
            // The embedding rescales each coordinate by a positive factor, so supports agree.
            Self::Torus(t) => Ok(torus_kind(verdict_for_support(&support_weights(t, v, 0.0)?)?.kind)),
            _ => self.classify(&rep.embed(v)?, options),
        }
    }
}

fn torus_kind(kind: TorusKind) -> VerdictKind {
    match kind {
        TorusKind::Closed => VerdictKind::Closed,
        TorusKind::SemistableNotClosed => VerdictKind::NotClosed,
        TorusKind::NullCone => VerdictKind::NullCone,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleException {
    pub index: usize,
    pub kind: VerdictKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerReport {
    pub seed: u64,
    pub n_samples: usize,
    pub method: SubgroupMethod,
    pub closed_fraction: f64,
    /// Largest normalized size of the subgroup moment map over the samples.
    pub max_restricted_mu: f64,
    pub exceptions: Vec<SampleException>,
    /// Verdicts for the special points, in input order.
    pub special_points: Vec<VerdictKind>,
}

impl SamplerReport {
    pub fn all_closed(&self) -> bool {
        self.exceptions.is_empty()
    }
}

/// Classify the `H_1`-orbits of random points `k·v0`, `k ∈ K`, and of the
/// special points (user coordinates).
///
/// Shard `s` draws its samples from stream `s` of a generator seeded with
/// `seed`, so results do not depend on the number of worker threads.
pub fn stability_sampler(
    rep: &Representation,
    v0: &FloatVector,
    h1: &SubgroupData,
    special_points: &[ExactVector],
    n_samples: usize,
    seed: u64,
    options: &KNOptions,
) -> Result<SamplerReport> {
    check_dim(rep.dim(), v0.dim())?;
    let mu_norm = moment_map(rep, v0)?.norm();
    if mu_norm > BASE_POINT_TOL * v0.norm_sqr() {
        return Err(Error::BasePointNotCritical { mu_norm });
    }
    let classifier = SubgroupClassifier::new(rep, h1.subalgebra())?;
    let m = rep.algebra_dim();
    let shards = n_samples.div_ceil(SHARD_SIZE);
    let results: Vec<Vec<(usize, VerdictKind, f64)>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let end = ((s + 1) * SHARD_SIZE).min(n_samples);
            (s * SHARD_SIZE..end)
                .map(|index| {
                    let coords: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let w = rep.act_group(&LieElement::compact(coords), v0)?;
                    let kind = classifier.classify(&w, options)?;
                    let restricted =
                        restricted_moment(rep, h1.subalgebra(), &w)?.norm() / w.norm_sqr().max(f64::MIN_POSITIVE);
                    Ok((index, kind, restricted))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut exceptions = Vec::new();
    let mut max_restricted_mu: f64 = 0.0;
    for (index, kind, restricted) in results.into_iter().flatten() {
        max_restricted_mu = max_restricted_mu.max(restricted);
        if kind != VerdictKind::Closed {
            exceptions.push(SampleException { index, kind });
        }
    }
    let closed_fraction = if n_samples == 0 { 1.0 } else { (n_samples - exceptions.len()) as f64 / n_samples as f64 };
    let special_points = special_points
        .iter()
        .map(|p| {
            check_dim(rep.dim(), p.dim())?;
            classifier.classify_exact(rep, p, options)
        })
        .collect::<Result<_>>()?;
    Ok(SamplerReport {
        seed,
        n_samples,
        method: classifier.method(),
        closed_fraction,
        max_restricted_mu,
        exceptions,
        special_points,
    })
}
