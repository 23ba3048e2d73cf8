//! Scenario files: strict JSON schema with exact rational literals.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::criteria::{Subgenerator, SubgroupData};
use crate::error::{Error, Result};
use crate::kempf_ness::{KNOptions, VerdictKind};
use crate::linalg::ComplexVector;
use crate::representation::{BinaryFormRep, CustomRep, Representation, TorusRep};
use crate::scalar::{format_rational, parse_rational, GaussianRational};
use crate::{ExactVector, FloatMatrix};

/// Exact rational written as a string, `"p/q"` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub BigRational);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(Rational).map_err(D::Error::custom)
    }
}

impl Rational {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Gaussian rational written as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub GaussianRational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [Rational(self.0.re.clone()), Rational(self.0.im.clone())].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[Rational; 2]>::deserialize(d)?;
        Ok(Exact(Complex::new(re.0, im.0)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepresentationSpec {
    Torus {
        rank: usize,
        weights: Vec<Vec<i64>>,
    },
    BinaryForm {
        degree: i64,
    },
    Custom {
        dim: usize,
        /// Skew-hermitian matrices, row by row.
        generators: Vec<Vec<Vec<Exact>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Analysis {
    #[serde(rename = "classify")]
    Classify,
    #[serde(rename = "identities")]
    Identities,
    #[serde(rename = "matsushima")]
    Matsushima,
    #[serde(rename = "luna")]
    Luna,
    #[serde(rename = "stability")]
    Stability,
    #[serde(rename = "hilbert-mumford")]
    HilbertMumford,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Classify => "classify",
            Analysis::Identities => "identities",
            Analysis::Matsushima => "matsushima",
            Analysis::Luna => "luna",
            Analysis::Stability => "stability",
            Analysis::HilbertMumford => "hilbert-mumford",
        }
    }
}

/// Overrides of the descent options; tolerances are exact literals.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_mu: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_null: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub armijo_c: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backtrack_factor: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_step: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preconditioned: Option<bool>,
}

impl KnOverrides {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn apply(&self) -> Result<KNOptions> {
        let mut o = KNOptions::default();
        let set = |slot: &mut f64, value: &Option<Rational>| {
            if let Some(v) = value {
                *slot = v.to_f64();
            }
        };
        set(&mut o.tol_mu, &self.tol_mu);
        set(&mut o.tol_null, &self.tol_null);
        set(&mut o.armijo_c, &self.armijo_c);
        set(&mut o.backtrack_factor, &self.backtrack_factor);
        set(&mut o.initial_step, &self.initial_step);
        if let Some(n) = self.max_iters {
            o.max_iters = n;
        }
        if let Some(p) = self.preconditioned {
            o.preconditioned = p;
        }
        o.validate()?;
        Ok(o)
    }
}

/// A subgroup generator: an ambient generator index or real coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Index(usize),
    Coords(Vec<Rational>),
}

impl GeneratorSpec {
    fn resolve(&self) -> Subgenerator {
        match self {
            GeneratorSpec::Index(j) => Subgenerator::Index(*j),
            GeneratorSpec::Coords(c) => Subgenerator::Coords(c.iter().map(Rational::to_f64).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalizer: Option<Vec<GeneratorSpec>>,
}

impl SubgroupSpec {
    pub fn build(&self, rep: &Representation) -> Result<SubgroupData> {
        let gens: Vec<Subgenerator> = self.generators.iter().map(GeneratorSpec::resolve).collect();
        let normalizer: Option<Vec<Subgenerator>> =
            self.normalizer.as_ref().map(|n| n.iter().map(GeneratorSpec::resolve).collect());
        SubgroupData::new(rep, &gens, normalizer.as_deref())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedKind {
    Closed,
    NotClosed,
    NullCone,
}

impl ExpectedKind {
    pub fn matches(self, kind: VerdictKind) -> bool {
        matches!(
            (self, kind),
            (ExpectedKind::Closed, VerdictKind::Closed)
                | (ExpectedKind::NotClosed, VerdictKind::NotClosed)
                | (ExpectedKind::NullCone, VerdictKind::NullCone)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialPoint {
    pub point: Vec<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedKind>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioOptions {
    #[serde(default, skip_serializing_if = "KnOverrides::is_empty")]
    pub kn: KnOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub special_points: Vec<SpecialPoint>,
    /// Cocharacter for the weight decomposition in `hilbert-mumford`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
}

impl ScenarioOptions {
    fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub representation: RepresentationSpec,
    pub vector: Vec<Exact>,
    pub analyses: Vec<Analysis>,
    #[serde(default, skip_serializing_if = "ScenarioOptions::is_empty")]
    pub options: ScenarioOptions,
}

impl Scenario {
    pub fn build_representation(&self) -> Result<Representation> {
        match &self.representation {
            RepresentationSpec::Torus { rank, weights } => {
                if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.len() != *rank) {
                    return Err(Error::Format(format!(
                        "field `representation.weights[{i}]`: expected {rank} entries, found {}",
                        w.len()
                    )));
                }
                Ok(Representation::torus(TorusRep::new(weights.clone())?))
            }
            RepresentationSpec::BinaryForm { degree } => Representation::binary_form(BinaryFormRep::new(*degree)?),
            RepresentationSpec::Custom { dim, generators, label } => {
                let mats = generators
                    .iter()
                    .enumerate()
                    .map(|(g, rows)| {
                        if rows.len() != *dim || rows.iter().any(|r| r.len() != *dim) {
                            return Err(Error::Format(format!(
                                "field `representation.generators[{g}]`: expected a {dim}x{dim} matrix"
                            )));
                        }
                        let data = rows.iter().flatten().map(|z| crate::scalar::to_c64(&z.0)).collect();
                        FloatMatrix::skew_hermitian(*dim, data)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Representation::custom(CustomRep::new(*dim, mats, label.clone())?)
            }
        }
    }

    /// The vector in user coordinates.
    pub fn exact_vector(&self) -> ExactVector {
        ComplexVector::new(self.vector.iter().map(|z| z.0.clone()).collect())
    }

    pub fn kn_options(&self) -> Result<KNOptions> {
        self.options.kn.apply()
    }

    /// Canonical serialization; parsing it gives back an equal scenario.
    pub fn to_canonical(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Parse and validate a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let rep = scenario.build_representation()?;
    if scenario.vector.len() != rep.dim() {
        return Err(Error::Format(format!(
            "field `vector`: representation has dimension {}, found {} entries",
            rep.dim(),
            scenario.vector.len()
        )));
    }
    for (i, p) in scenario.options.special_points.iter().enumerate() {
        if p.point.len() != rep.dim() {
            return Err(Error::Format(format!(
                "field `options.special_points[{i}].point`: expected {} entries, found {}",
                rep.dim(),
                p.point.len()
            )));
        }
    }
    scenario.kn_options()?;
    Ok(scenario)
}
