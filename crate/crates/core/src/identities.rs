//! Randomized probes of the moment-map identities.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::Result;
use crate::hilbert_mumford::weight_decompose;
use crate::moment::{
    commutator_residual, equivariance_residual, invariance_residual_omega, kn_derivative_residual, moment_map, FD_STEP,
};
use crate::representation::{Family, Representation};
use crate::FloatVector;

pub const KN_DERIVATIVE_CONTRACT: f64 = 1e-6;
pub const INVARIANCE_CONTRACT: f64 = 1e-10;
pub const COMMUTATOR_CONTRACT: f64 = 1e-9;
pub const EQUIVARIANCE_CONTRACT: f64 = 1e-8;
pub const PAIRING_CONTRACT: f64 = 1e-12;

/// Largest residual of each identity over a probe run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub probes: usize,
    pub seed: u64,
    pub kn_derivative: f64,
    pub invariance_omega: f64,
    pub commutator: f64,
    pub equivariance: f64,
    /// Absent for representations without a torus of weights.
    pub pairing: Option<f64>,
}

impl IdentityResiduals {
    /// Names of the identities whose residual exceeds its contract.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let checks = [
            ("kn_derivative", self.kn_derivative, KN_DERIVATIVE_CONTRACT),
            ("invariance_omega", self.invariance_omega, INVARIANCE_CONTRACT),
            ("commutator", self.commutator, COMMUTATOR_CONTRACT),
            ("equivariance", self.equivariance, EQUIVARIANCE_CONTRACT),
            ("pairing", self.pairing.unwrap_or(0.0), PAIRING_CONTRACT),
        ];
        for (name, value, bound) in checks {
            if value.is_nan() || value > bound {
                out.push(format!("{name} residual {value:e} exceeds {bound:e}"));
            }
        }
        out
    }

    fn absorb(&mut self, probe: &ProbeResiduals) {
        self.kn_derivative = self.kn_derivative.max(probe.kn_derivative);
        self.invariance_omega = self.invariance_omega.max(probe.invariance_omega);
        self.commutator = self.commutator.max(probe.commutator);
        self.equivariance = self.equivariance.max(probe.equivariance);
        if let Some(p) = probe.pairing {
            self.pairing = Some(self.pairing.unwrap_or(0.0).max(p));
        }
    }
}

/// Residuals of a single probe.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResiduals {
    pub kn_derivative: f64,
    pub invariance_omega: f64,
    pub commutator: f64,
    pub equivariance: f64,
    pub pairing: Option<f64>,
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> FloatVector {
    let v: FloatVector =
        (0..n).map(|_| Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))).collect();
    let norm = v.norm();
    v.scale_real(&(1.0 / norm.max(f64::MIN_POSITIVE)))
}

fn gaussian(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| StandardNormal.sample(&mut *rng)).collect()
}

/// Gaussian compact element rescaled to unit operator norm.
fn unit_element(rep: &Representation, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let xi = gaussian(rng, rep.algebra_dim());
    let norm = rep.compact_operator(&xi)?.norm_operator();
    Ok(if norm > 0.0 { xi.iter().map(|x| x / norm).collect() } else { xi })
}

/// `|⟨μ(v), ξ_λ⟩ − (1/2) Σ_m m ||v_m||^2|` for the weight torus of `rep`.
///
/// For binary forms `ξ_λ = λ·ξ_0` is paired with the full moment map, so the
/// torus decomposition is checked against the SL(2) formula.
fn pairing_probe(rep: &Representation, v: &FloatVector, rng: &mut ChaCha8Rng) -> Result<Option<f64>> {
    let (torus, xi_of) = match rep.family() {
        Family::Torus(t) => (t.clone(), None),
        Family::BinaryForm(b) => (b.diagonal_torus(), Some(rep.algebra_dim())),
        Family::Custom(_) => return Ok(None),
    };
    let lambda: Vec<i64> = (0..torus.rank()).map(|_| rng.random_range(-3..=3)).collect();
    let mut xi = vec![0.0; xi_of.unwrap_or(torus.rank())];
    for (slot, l) in xi.iter_mut().zip(&lambda) {
        *slot = *l as f64;
    }
    let lhs = moment_map(rep, v)?.pair(&xi);
    let dec = weight_decompose(&torus, v, &lambda)?;
    let rhs: f64 = dec.components().iter().map(|(m, c)| *m as f64 * c.norm_sqr()).sum::<f64>() / 2.0;
    Ok(Some((lhs - rhs).abs()))
}

/// One probe: unit vectors `v, v'`, unit-norm `ξ, η` and a Gaussian `k`.
pub fn probe_once(rep: &Representation, rng: &mut ChaCha8Rng) -> Result<ProbeResiduals> {
    let n = rep.dim();
    let v = unit_vector(rng, n);
    let w = unit_vector(rng, n);
    let xi = unit_element(rep, rng)?;
    let eta = unit_element(rep, rng)?;
    let k = gaussian(rng, rep.algebra_dim());
    Ok(ProbeResiduals {
        kn_derivative: kn_derivative_residual(rep, &v, &xi, FD_STEP)?,
        invariance_omega: invariance_residual_omega(rep, &v, &w, &xi)?,
        commutator: commutator_residual(rep, &v, &xi, &eta)?,
        equivariance: equivariance_residual(rep, &v, &k)?,
        pairing: pairing_probe(rep, &v, rng)?,
    })
}

/// Maxima over `probes` seeded probes.
pub fn identity_probes(rep: &Representation, probes: usize, seed: u64) -> Result<IdentityResiduals> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = IdentityResiduals { probes, seed, ..Default::default() };
    for _ in 0..probes {
        out.absorb(&probe_once(rep, &mut rng)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::{BinaryFormRep, TorusRep};

    #[test]
    fn probes_meet_contracts() {
        let b = Representation::binary_form(BinaryFormRep::new(4).unwrap()).unwrap();
        let r = identity_probes(&b, 20, 1).unwrap();
        assert!(r.violations().is_empty(), "{r:?}");
        assert!(r.pairing.is_some());
        let t = Representation::torus(TorusRep::new(vec![vec![1, -2], vec![0, 3], vec![-5, 5]]).unwrap());
        let r = identity_probes(&t, 20, 2).unwrap();
        assert!(r.violations().is_empty(), "{r:?}");
        assert_eq!(r, identity_probes(&t, 20, 2).unwrap());
    }

    #[test]
    fn violations_are_named() {
        let r = IdentityResiduals { commutator: 1.0, ..Default::default() };
        let v = r.violations();
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("commutator"));
        let r = IdentityResiduals { kn_derivative: f64::NAN, ..Default::default() };
        assert_eq!(r.violations().len(), 1);
    }
}
