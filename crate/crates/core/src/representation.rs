//! The three supported representation families and their Lie algebra action.
//!
//! Every representation is stored in orthonormal coordinates for its
//! invariant hermitian product, so the compact generators are genuinely
//! skew-hermitian matrices. Binary forms keep their monomial coefficients as
//! the user-facing (exact) coordinates; [`Representation::embed`] rescales them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::binomial;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{diagonal_exp, matrix_exp, matrix_expm1, subspace_dimension, DEFAULT_RANK_TOL};
use crate::{ExactVector, FloatMatrix, FloatVector};

/// Least-squares residual allowed when resolving a commutator in the generator span.
pub const BRACKET_TOL: f64 = 1e-9;

/// Torus `(C^×)^r` acting on `C^n` through integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusRep {
    weights: Vec<Vec<i64>>,
}

impl TorusRep {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        let rank = weights.first().map(Vec::len).unwrap_or(0);
        if weights.is_empty() || rank == 0 {
            return Err(Error::Format("torus weight matrix must be nonempty".into()));
        }
        if let Some(bad) = weights.iter().position(|row| row.len() != rank) {
            return Err(Error::Format(format!("weight row {bad} has length {} (rank {rank})", weights[bad].len())));
        }
        Ok(Self { weights })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.weights[0].len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    /// `⟨a_i, x⟩` for a real vector `x`.
    pub fn pairing(&self, i: usize, x: &[f64]) -> f64 {
        self.weights[i].iter().zip(x).map(|(a, b)| *a as f64 * b).sum()
    }

    /// `⟨a_i, λ⟩` for an integer cocharacter.
    pub fn int_pairing(&self, i: usize, lambda: &[i64]) -> i64 {
        self.weights[i].iter().zip(lambda).map(|(a, b)| a * b).sum()
    }
}

/// SL(2) acting on binary forms of degree `d` in the monomial basis
/// `x^{d-k} y^k`, `k = 0..=d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryFormRep {
    degree: usize,
}

impl BinaryFormRep {
    pub fn new(degree: i64) -> Result<Self> {
        if degree <= 0 {
            return Err(Error::Format(format!("binary form degree must be positive, got {degree}")));
        }
        Ok(Self { degree: degree as usize })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    /// Diagonal-torus weight `d - 2k` of `x^{d-k} y^k`.
    pub fn torus_weight(&self, k: usize) -> i64 {
        self.degree as i64 - 2 * k as i64
    }

    /// `||x^{d-k} y^k||^2 = 1 / binomial(d, k)`.
    pub fn monomial_norm_sqr(&self, k: usize) -> f64 {
        1.0 / binomial(self.degree as u64, k as u64) as f64
    }

    /// Factor taking monomial coefficient `c_k` to orthonormal coordinate `z_k`.
    pub fn coordinate_scale(&self, k: usize) -> f64 {
        self.monomial_norm_sqr(k).sqrt()
    }

    /// Rank-one torus representation of the diagonal subgroup.
    pub fn diagonal_torus(&self) -> TorusRep {
        TorusRep::new((0..self.dim()).map(|k| vec![self.torus_weight(k)]).collect()).expect("nonempty weights")
    }

    /// Operator of `ξ ∈ sl(2)` (given as its 2×2 matrix acting on `x = e1, y = e2`)
    /// in the monomial basis, extended to forms as a derivation.
    fn monomial_operator(&self, xi: [[Complex64; 2]; 2]) -> FloatMatrix {
        let d = self.degree;
        let n = d + 1;
        let (alpha, beta, gamma, delta) = (xi[0][0], xi[0][1], xi[1][0], xi[1][1]);
        let mut data = vec![Complex64::zero(); n * n];
        for k in 0..n {
            let a = (d - k) as f64;
            let b = k as f64;
            data[k * n + k] += alpha * a + delta * b;
            if k + 1 < n {
                data[(k + 1) * n + k] += gamma * a;
            }
            if k >= 1 {
                data[(k - 1) * n + k] += beta * b;
            }
        }
        FloatMatrix::new(n, n, data).expect("square")
    }

    /// The three su(2) generators in orthonormal coordinates: the diagonal
    /// `diag(i, -i)`, the real rotation `[[0,1],[-1,0]]`, and `[[0,i],[i,0]]`.
    pub fn compact_generators(&self) -> Result<Vec<FloatMatrix>> {
        let i = Complex64::new(0.0, 1.0);
        let o = Complex64::zero();
        let one = Complex64::new(1.0, 0.0);
        let defining = [[[i, o], [o, -i]], [[o, one], [-one, o]], [[o, i], [i, o]]];
        let n = self.dim();
        defining
            .iter()
            .map(|xi| {
                let m = self.monomial_operator(*xi);
                let scaled = FloatMatrix::from_fn(n, n, |r, c| {
                    *m.get(r, c) * (self.coordinate_scale(r) / self.coordinate_scale(c))
                });
                FloatMatrix::skew_hermitian(n, scaled.data().to_vec()).map_err(|_| {
                    Error::InvalidRepresentation(format!(
                        "su(2) generator not skew-hermitian in degree {}",
                        self.degree
                    ))
                })
            })
            .collect()
    }
}

/// User-supplied compact generators acting on `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CustomRep {
    dim: usize,
    generators: Vec<FloatMatrix>,
    label: Option<String>,
}

impl CustomRep {
    pub fn new(dim: usize, generators: Vec<FloatMatrix>, label: Option<String>) -> Result<Self> {
        if dim == 0 || generators.is_empty() {
            return Err(Error::Format("custom representation needs dim ≥ 1 and at least one generator".into()));
        }
        for (j, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::Format(format!("generator {j} is {}x{}, expected {dim}x{dim}", g.rows(), g.cols())));
            }
            if !g.skew_flag() {
                return Err(Error::InvalidRepresentation(format!("generator {j} is not skew-hermitian")));
            }
        }
        let vectorized: Vec<FloatVector> = generators.iter().map(FloatMatrix::vectorize).collect();
        let rank = subspace_dimension(&vectorized, DEFAULT_RANK_TOL)?;
        if rank != generators.len() {
            return Err(Error::InvalidRepresentation(format!(
                "generators are linearly dependent (rank {rank} of {})",
                generators.len()
            )));
        }
        Ok(Self { dim, generators, label })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[FloatMatrix] {
        &self.generators
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Torus(TorusRep),
    BinaryForm(BinaryFormRep),
    Custom(CustomRep),
}

/// Element of `𝔤 = 𝔨 ⊕ i𝔨` in generator coordinates.
///
/// The operator is `Σ c_j ξ_j + Σ h_j H_j` with `H_j = ξ_j / i`, so that for a
/// torus `H_j` is the real diagonal of weights and hermitian coordinates act
/// by `e^{⟨a_i, h⟩}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieElement {
    pub compact: Vec<f64>,
    pub hermitian: Vec<f64>,
}

impl LieElement {
    pub fn zero(m: usize) -> Self {
        Self { compact: vec![0.0; m], hermitian: vec![0.0; m] }
    }

    pub fn compact(coords: Vec<f64>) -> Self {
        let m = coords.len();
        Self { compact: coords, hermitian: vec![0.0; m] }
    }

    pub fn hermitian(coords: Vec<f64>) -> Self {
        let m = coords.len();
        Self { compact: vec![0.0; m], hermitian: coords }
    }

    pub fn len(&self) -> usize {
        self.compact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.compact.is_empty()
    }

    pub fn is_compact(&self) -> bool {
        self.hermitian.iter().all(|h| *h == 0.0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.compact.iter().all(|c| *c == 0.0)
    }
}

/// A representation with its compact generators, inner product `Q` on `𝔨`
/// and (when the generator span is bracket-closed) structure constants.
#[derive(Clone, Debug)]
pub struct Representation {
    family: Family,
    dim: usize,
    generators: Vec<FloatMatrix>,
    inner: DMatrix<f64>,
    inner_inv: DMatrix<f64>,
    /// Inverse Frobenius Gram matrix of the generators, for least squares.
    gram_inv: DMatrix<f64>,
    /// `structure[a]` has column `b` equal to the coordinates of `[ξ_a, ξ_b]`.
    structure: Option<Vec<DMatrix<f64>>>,
    bracket_residual: f64,
}

impl Representation {
    pub fn torus(rep: TorusRep) -> Self {
        let (n, r) = (rep.dim(), rep.rank());
        let generators: Vec<FloatMatrix> = (0..r)
            .map(|j| {
                let diag: Vec<Complex64> = (0..n).map(|i| Complex64::new(0.0, rep.weight(i)[j] as f64)).collect();
                FloatMatrix::diagonal(&diag)
            })
            .collect();
        let structure = Some(vec![DMatrix::zeros(r, r); r]);
        let gram_inv = frobenius_gram(&generators).try_inverse().unwrap_or_else(|| DMatrix::zeros(r, r));
        Self {
            family: Family::Torus(rep),
            dim: n,
            generators,
            inner: DMatrix::identity(r, r),
            inner_inv: DMatrix::identity(r, r),
            gram_inv,
            structure,
            bracket_residual: 0.0,
        }
    }

    pub fn binary_form(rep: BinaryFormRep) -> Result<Self> {
        let generators = rep.compact_generators()?;
        // -tr(ξη) on the defining 2×2 matrices.
        let inner = DMatrix::identity(3, 3) * 2.0;
        let gram_inv = frobenius_gram(&generators)
            .try_inverse()
            .ok_or_else(|| Error::InvalidRepresentation("degenerate su(2) generators".into()))?;
        let mut out = Self {
            gram_inv,
            family: Family::BinaryForm(rep),
            dim: rep.dim(),
            generators,
            inner_inv: inner.clone() * 0.25,
            inner,
            structure: None,
            bracket_residual: 0.0,
        };
        out.resolve_structure();
        if out.structure.is_none() {
            return Err(Error::InvalidRepresentation("su(2) generators not closed under bracket".into()));
        }
        Ok(out)
    }

    pub fn custom(rep: CustomRep) -> Result<Self> {
        let generators = rep.generators().to_vec();
        let inner = frobenius_gram(&generators);
        let inner_inv = inner
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidRepresentation("singular generator Gram matrix".into()))?;
        let mut out = Self {
            family: Family::Custom(rep.clone()),
            dim: rep.dim(),
            generators,
            gram_inv: inner_inv.clone(),
            inner,
            inner_inv,
            structure: None,
            bracket_residual: 0.0,
        };
        out.resolve_structure();
        Ok(out)
    }

    fn resolve_structure(&mut self) {
        let m = self.generators.len();
        let mut structure = vec![DMatrix::zeros(m, m); m];
        let mut worst: f64 = 0.0;
        for (a, block) in structure.iter_mut().enumerate() {
            for b in 0..m {
                let c = self.generators[a].commutator(&self.generators[b]).expect("square");
                let (coords, residual) = self.project_operator(&c);
                worst = worst.max(residual);
                for (k, x) in coords.iter().enumerate() {
                    block[(k, b)] = *x;
                }
            }
        }
        self.bracket_residual = worst;
        self.structure = (worst <= BRACKET_TOL).then_some(structure);
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn as_torus(&self) -> Option<&TorusRep> {
        match &self.family {
            Family::Torus(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_binary_form(&self) -> Option<&BinaryFormRep> {
        match &self.family {
            Family::BinaryForm(b) => Some(b),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Real dimension `m` of `𝔨`.
    pub fn algebra_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[FloatMatrix] {
        &self.generators
    }

    /// Inner product `Q` on `𝔨` in generator coordinates.
    pub fn inner_product(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn inner_product_inv(&self) -> &DMatrix<f64> {
        &self.inner_inv
    }

    /// Worst least-squares residual met while resolving generator brackets.
    pub fn bracket_residual(&self) -> f64 {
        self.bracket_residual
    }

    pub fn is_bracket_closed(&self) -> bool {
        self.structure.is_some()
    }

    /// Map user coordinates (monomial coefficients for binary forms) to the
    /// orthonormal floating coordinates used by every numeric routine.
    pub fn embed(&self, v: &ExactVector) -> Result<FloatVector> {
        self.embed_float(&v.to_float())
    }

    pub fn embed_float(&self, v: &FloatVector) -> Result<FloatVector> {
        check_dim(self.dim, v.dim())?;
        Ok(match &self.family {
            Family::BinaryForm(b) => v.iter().enumerate().map(|(k, z)| z * b.coordinate_scale(k)).collect(),
            _ => v.clone(),
        })
    }

    /// Inverse of [`Self::embed_float`].
    pub fn user_coordinates(&self, z: &FloatVector) -> Result<FloatVector> {
        check_dim(self.dim, z.dim())?;
        Ok(match &self.family {
            Family::BinaryForm(b) => z.iter().enumerate().map(|(k, w)| w / b.coordinate_scale(k)).collect(),
            _ => z.clone(),
        })
    }

    fn check_lie(&self, xi: &LieElement) -> Result<()> {
        check_dim(self.algebra_dim(), xi.compact.len())?;
        check_dim(self.algebra_dim(), xi.hermitian.len())
    }

    /// Matrix of a Lie algebra element.
    pub fn operator(&self, xi: &LieElement) -> Result<FloatMatrix> {
        self.check_lie(xi)?;
        let n = self.dim;
        let mut data = vec![Complex64::zero(); n * n];
        for (j, g) in self.generators.iter().enumerate() {
            let coef = Complex64::new(xi.compact[j], 0.0) + Complex64::new(0.0, -xi.hermitian[j]);
            if coef.is_zero() {
                continue;
            }
            for (slot, z) in data.iter_mut().zip(g.data()) {
                *slot += coef * z;
            }
        }
        FloatMatrix::new(n, n, data)
    }

    /// Operator of a compact element given by its coordinates.
    pub fn compact_operator(&self, coords: &[f64]) -> Result<FloatMatrix> {
        self.operator(&LieElement::compact(coords.to_vec()))
    }

    /// Infinitesimal action `ξ v`.
    pub fn act_lie(&self, xi: &LieElement, v: &FloatVector) -> Result<FloatVector> {
        self.check_lie(xi)?;
        check_dim(self.dim, v.dim())?;
        if let Family::Torus(t) = &self.family {
            return Ok(v
                .iter()
                .enumerate()
                .map(|(i, z)| z * Complex64::new(t.pairing(i, &xi.hermitian), t.pairing(i, &xi.compact)))
                .collect());
        }
        self.operator(xi)?.mul_vec(v)
    }

    /// Group action `exp(ξ) v`.
    pub fn act_group(&self, g: &LieElement, v: &FloatVector) -> Result<FloatVector> {
        self.check_lie(g)?;
        check_dim(self.dim, v.dim())?;
        if let Family::Torus(t) = &self.family {
            let diag: Vec<Complex64> =
                (0..self.dim).map(|i| Complex64::new(t.pairing(i, &g.hermitian), t.pairing(i, &g.compact))).collect();
            return Ok(diagonal_exp(&diag).iter().zip(v.iter()).map(|(e, z)| e * z).collect());
        }
        matrix_exp(&self.operator(g)?)?.mul_vec(v)
    }

    /// Increment `exp(ξ) v - v`, accurate for small `ξ`.
    pub fn act_group_increment(&self, g: &LieElement, v: &FloatVector) -> Result<FloatVector> {
        self.check_lie(g)?;
        check_dim(self.dim, v.dim())?;
        if let Family::Torus(t) = &self.family {
            return Ok((0..self.dim)
                .map(|i| complex_expm1(t.pairing(i, &g.hermitian), t.pairing(i, &g.compact)) * v[i])
                .collect());
        }
        matrix_expm1(&self.operator(g)?)?.mul_vec(v)
    }

    /// Real least-squares coordinates of an operator against the compact
    /// generators, and the Frobenius residual of the fit.
    pub fn project_operator(&self, op: &FloatMatrix) -> (Vec<f64>, f64) {
        let m = self.algebra_dim();
        let rhs = nalgebra::DVector::from_fn(m, |a, _| self.generators[a].frobenius_dot(op).expect("same shape"));
        let coords = &self.gram_inv * rhs;
        let mut fit = FloatMatrix::zeros(self.dim, self.dim);
        for (a, g) in self.generators.iter().enumerate() {
            fit = fit.add(&g.scale_real(&coords[a])).expect("same shape");
        }
        let residual = op.sub(&fit).expect("same shape").norm_frobenius();
        (coords.iter().cloned().collect(), residual)
    }

    /// Coordinates of `[x, y]` for compact coordinate vectors `x, y`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let ad = self.ad_matrix(x)?;
        check_dim(self.algebra_dim(), y.len())?;
        Ok((ad * nalgebra::DVector::from_column_slice(y)).iter().cloned().collect())
    }

    /// Matrix of `ad x = [x, ·]` on compact coordinates.
    pub fn ad_matrix(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.algebra_dim(), x.len())?;
        let structure =
            self.structure.as_ref().ok_or(Error::BracketEscapesAlgebra { residual: self.bracket_residual })?;
        let m = self.algebra_dim();
        let mut ad = DMatrix::zeros(m, m);
        for (a, s) in structure.iter().enumerate() {
            if x[a] != 0.0 {
                ad += s * x[a];
            }
        }
        Ok(ad)
    }
}

/// `e^{x + iy} - 1` without cancellation.
fn complex_expm1(x: f64, y: f64) -> Complex64 {
    let half = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

fn frobenius_gram(generators: &[FloatMatrix]) -> DMatrix<f64> {
    let m = generators.len();
    DMatrix::from_fn(m, m, |a, b| generators[a].frobenius_dot(&generators[b]).expect("same shape"))
}
