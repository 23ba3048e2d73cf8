//! Weight decomposition of a vector under a torus cocharacter.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{check_dim, Result};
use crate::linalg::{hermitian_inner, ComplexVector};
use crate::moment::torus_moment;
use crate::representation::TorusRep;
use crate::scalar::Real;

/// `v = Σ_m v_m` where `v_m` collects the coordinates with `⟨a_i, λ⟩ = m`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightDecomposition<R> {
    dim: usize,
    components: BTreeMap<i64, ComplexVector<R>>,
}

impl<R: Real> WeightDecomposition<R> {
    pub fn from_components(dim: usize, components: BTreeMap<i64, ComplexVector<R>>) -> Result<Self> {
        for c in components.values() {
            check_dim(dim, c.dim())?;
        }
        Ok(Self { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &BTreeMap<i64, ComplexVector<R>> {
        &self.components
    }

    pub fn component(&self, m: i64) -> Option<&ComplexVector<R>> {
        self.components.get(&m)
    }

    /// `Σ_m v_m`.
    pub fn reassemble(&self) -> ComplexVector<R> {
        self.components.values().fold(ComplexVector::zeros(self.dim), |acc, c| acc.add(c).expect("same dimension"))
    }

    /// Largest `|(v_m, v_m')|` over distinct weights.
    pub fn max_cross_inner(&self) -> R {
        let parts: Vec<&ComplexVector<R>> = self.components.values().collect();
        let mut worst = R::zero();
        for (a, u) in parts.iter().enumerate() {
            for w in &parts[a + 1..] {
                let z = hermitian_inner(u, w).expect("same dimension");
                let size = z.re.abs() + z.im.abs();
                if size > worst {
                    worst = size;
                }
            }
        }
        worst
    }
}

/// Split `v` by the pairings `m_i = ⟨a_i, λ⟩`.
pub fn weight_decompose<R: Real>(
    rep: &TorusRep,
    v: &ComplexVector<R>,
    lambda: &[i64],
) -> Result<WeightDecomposition<R>> {
    check_dim(rep.dim(), v.dim())?;
    check_dim(rep.rank(), lambda.len())?;
    let mut components: BTreeMap<i64, Vec<Complex<R>>> = BTreeMap::new();
    for (i, z) in v.iter().enumerate() {
        let m = rep.int_pairing(i, lambda);
        let slot = components.entry(m).or_insert_with(|| vec![Complex::zero(); v.dim()]);
        slot[i] = z.clone();
    }
    Ok(WeightDecomposition {
        dim: v.dim(),
        components: components.into_iter().map(|(m, e)| (m, ComplexVector::new(e))).collect(),
    })
}

/// `lim_{t→0} τ(t) v`: `None` if some negative-weight component is nonzero,
/// otherwise the weight-zero component (possibly zero).
pub fn one_ps_limit<R: Real>(dec: &WeightDecomposition<R>) -> Option<ComplexVector<R>> {
    if dec.components.range(..0).any(|(_, c)| !c.is_zero()) {
        return None;
    }
    Some(dec.components.get(&0).cloned().unwrap_or_else(|| ComplexVector::zeros(dec.dim)))
}

/// `|⟨μ(v), ξ_τ⟩ − (1/2) Σ_m m ||v_m||^2|` with `ξ_τ = Σ_j λ_j ξ_j`.
///
/// Exact vectors give an exact residual.
pub fn pairing_identity_residual<R: Real>(rep: &TorusRep, v: &ComplexVector<R>, lambda: &[i64]) -> Result<R> {
    let mu = torus_moment(rep, v)?;
    check_dim(mu.len(), lambda.len())?;
    let lhs = mu.iter().zip(lambda).fold(R::zero(), |acc, (m, l)| acc + m.clone() * R::from_i64(*l));
    let dec = weight_decompose(rep, v, lambda)?;
    let weighted = dec.components.iter().fold(R::zero(), |acc, (m, c)| acc + R::from_i64(*m) * c.norm_sqr());
    let rhs = weighted / R::from_i64(2);
    Ok((lhs - rhs).abs())
}

/// `⟨μ(v), ξ_τ⟩` for a torus cocharacter.
pub fn moment_pairing<R: Real>(rep: &TorusRep, v: &ComplexVector<R>, lambda: &[i64]) -> Result<R> {
    let mu = torus_moment(rep, v)?;
    check_dim(mu.len(), lambda.len())?;
    Ok(mu.iter().zip(lambda).fold(R::zero(), |acc, (m, l)| acc + m.clone() * R::from_i64(*l)))
}
