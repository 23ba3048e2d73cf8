//! The moment map `⟨μ(v), ξ⟩ = (1/2i)(ξv, v)` and the identities it satisfies.

use nalgebra::{DMatrix, DVector};
use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{hermitian_inner, matrix_exp, ComplexVector};
use crate::representation::{LieElement, Representation, TorusRep, BRACKET_TOL};
use crate::scalar::Real;
use crate::{FloatMatrix, FloatVector};

/// Default step for the central finite difference in [`kn_derivative_residual`].
pub const FD_STEP: f64 = 1e-4;
/// Allowed imaginary part (relative) when evaluating the generic formula.
const REALNESS_TOL: f64 = 1e-12;

/// `μ(v) ∈ 𝔨*` as pairings against the compact generators, together with
/// the inner product `Q` that identifies `𝔨*` with `𝔨`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentValue {
    coords: Vec<f64>,
    #[serde(skip)]
    inner: DMatrix<f64>,
}

impl MomentValue {
    pub fn new(coords: Vec<f64>, inner: DMatrix<f64>) -> Result<Self> {
        check_dim(inner.nrows(), coords.len())?;
        Ok(Self { coords, inner })
    }

    /// `⟨μ(v), ξ_j⟩` for each generator.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn inner_product(&self) -> &DMatrix<f64> {
        &self.inner
    }

    /// `μ^♯ = Q^{-1} · coords`, the element of `𝔨` dual to `μ(v)`.
    pub fn sharp(&self) -> Vec<f64> {
        let q_inv = self.inner.clone().try_inverse().expect("Q is positive definite");
        (q_inv * DVector::from_column_slice(&self.coords)).iter().cloned().collect()
    }

    /// `||μ||_Q^2 = ⟨μ, μ^♯⟩`.
    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().zip(self.sharp()).map(|(a, b)| a * b).sum::<f64>().max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Pairing `⟨μ(v), ξ⟩` for compact coordinates `ξ`.
    pub fn pair(&self, xi: &[f64]) -> f64 {
        self.coords.iter().zip(xi).map(|(a, b)| a * b).sum()
    }
}

/// Closed-form torus moment map `(1/2) Σ_i a_ij |v_i|^2`, exact in exact mode.
pub fn torus_moment<R: Real>(rep: &TorusRep, v: &ComplexVector<R>) -> Result<Vec<R>> {
    check_dim(rep.dim(), v.dim())?;
    let two = R::from_i64(2);
    Ok((0..rep.rank())
        .map(|j| {
            let sum =
                v.iter().enumerate().fold(R::zero(), |acc, (i, z)| acc + R::from_i64(rep.weight(i)[j]) * z.norm_sqr());
            sum / two.clone()
        })
        .collect())
}

/// `(1/2i)(ξ v, v)` for an operator `ξ`, checked to be real.
pub(crate) fn pairing_with_operator(op: &FloatMatrix, v: &FloatVector) -> Result<f64> {
    let z = hermitian_inner(&op.mul_vec(v)?, v)?;
    let value = z / Complex64::new(0.0, 2.0);
    let scale = op.norm_frobenius().max(1.0) * v.norm_sqr().max(f64::MIN_POSITIVE);
    assert!(
        value.im.abs() <= REALNESS_TOL * scale,
        "moment pairing has imaginary part {:e}; operator is not skew-hermitian",
        value.im
    );
    Ok(value.re)
}

/// Moment map; the torus family uses its closed form.
pub fn moment_map(rep: &Representation, v: &FloatVector) -> Result<MomentValue> {
    check_dim(rep.dim(), v.dim())?;
    let coords = match rep.as_torus() {
        Some(t) => torus_moment(t, v)?,
        None => return moment_map_generic(rep, v),
    };
    MomentValue::new(coords, rep.inner_product().clone())
}

/// Moment map through the defining formula for every family.
pub fn moment_map_generic(rep: &Representation, v: &FloatVector) -> Result<MomentValue> {
    check_dim(rep.dim(), v.dim())?;
    let coords = rep.generators().iter().map(|g| pairing_with_operator(g, v)).collect::<Result<Vec<_>>>()?;
    MomentValue::new(coords, rep.inner_product().clone())
}

/// `ω(u, v) = Im (u, v)`.
pub fn symplectic_form<R: Real>(u: &ComplexVector<R>, v: &ComplexVector<R>) -> Result<R> {
    Ok(hermitian_inner(u, v)?.im)
}

fn compact(rep: &Representation, coords: &[f64]) -> Result<LieElement> {
    check_dim(rep.algebra_dim(), coords.len())?;
    Ok(LieElement::compact(coords.to_vec()))
}

/// `|D + 4⟨μ(v), ξ⟩|` where `D` is the central difference of
/// `t ↦ ||exp(itξ) v||^2` at zero with step `h`.
pub fn kn_derivative_residual(rep: &Representation, v: &FloatVector, xi: &[f64], h: f64) -> Result<f64> {
    compact(rep, xi)?;
    let along = |t: f64| -> Result<f64> {
        // exp(itξ) has hermitian coordinates -tξ under H_j = ξ_j / i.
        let g = LieElement::hermitian(xi.iter().map(|x| -t * x).collect());
        Ok(rep.act_group(&g, v)?.norm_sqr())
    };
    let derivative = (along(h)? - along(-h)?) / (2.0 * h);
    let mu = moment_map(rep, v)?;
    Ok((derivative + 4.0 * mu.pair(xi)).abs())
}

/// `|ω(ξv₁, v₂) + ω(v₁, ξv₂)|`.
pub fn invariance_residual_omega(rep: &Representation, v1: &FloatVector, v2: &FloatVector, xi: &[f64]) -> Result<f64> {
    let xi = compact(rep, xi)?;
    let a = symplectic_form(&rep.act_lie(&xi, v1)?, v2)?;
    let b = symplectic_form(v1, &rep.act_lie(&xi, v2)?)?;
    Ok((a + b).abs())
}

/// `|⟨μ(v), [ξ, η]⟩ − ω(ξv, ηv)|`.
pub fn commutator_residual(rep: &Representation, v: &FloatVector, xi: &[f64], eta: &[f64]) -> Result<f64> {
    let (xi_el, eta_el) = (compact(rep, xi)?, compact(rep, eta)?);
    let bracket = rep.operator(&xi_el)?.commutator(&rep.operator(&eta_el)?)?;
    let (coords, residual) = rep.project_operator(&bracket);
    if residual > BRACKET_TOL * bracket.norm_frobenius().max(1.0) {
        return Err(Error::BracketEscapesAlgebra { residual });
    }
    let lhs = moment_map(rep, v)?.pair(&coords);
    let rhs = symplectic_form(&rep.act_lie(&xi_el, v)?, &rep.act_lie(&eta_el, v)?)?;
    Ok((lhs - rhs).abs())
}

/// `exp` of a real square matrix through the complex routine.
pub(crate) fn real_matrix_exp(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let c = FloatMatrix::from_fn(n, n, |i, j| Complex::new(a[(i, j)], 0.0));
    let e = matrix_exp(&c)?;
    Ok(DMatrix::from_fn(n, n, |i, j| e.get(i, j).re))
}

/// `||μ(exp(k) v) − Ad*_{exp k} μ(v)||` with the coadjoint action computed
/// as `exp(-ad k)^T` on pairing coordinates.
pub fn equivariance_residual(rep: &Representation, v: &FloatVector, k: &[f64]) -> Result<f64> {
    let k_el = compact(rep, k)?;
    let moved = moment_map(rep, &rep.act_group(&k_el, v)?)?;
    let ad = rep.ad_matrix(k)?;
    let coadjoint = real_matrix_exp(&(-ad))?.transpose();
    let transported = coadjoint * DVector::from_column_slice(moment_map(rep, v)?.coords());
    Ok(moved.coords().iter().zip(transported.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
}
