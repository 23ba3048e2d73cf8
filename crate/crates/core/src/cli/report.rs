//! Running a scenario and assembling its report.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::scenario::{Analysis, Scenario};
use crate::criteria::{
    isotropic_check, luna_restriction_check, luna_tangent_check, matsushima_check, stability_sampler, KERNEL_TOL,
    STABILIZER_TOL,
};
use crate::error::{Error, Result};
use crate::hilbert_mumford::{
    find_destabilizing_1ps, moment_pairing, one_ps_limit, pairing_identity_residual, sl2_form_oracle, support_weights,
    torus_orbit_oracle, verify_sl2_witness, weight_decompose, OnePS, TorusCertificate, TorusKind,
};
use crate::identities::identity_probes;
use crate::kempf_ness::{classify_orbit, KNOptions, OrbitVerdict, VerdictKind, Witness};
use crate::moment::moment_map;
use crate::representation::{Family, Representation};
use crate::scalar::{format_rational, GaussianRational};
use crate::{ExactVector, FloatVector};

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_PROBES: usize = 20;
pub const DEFAULT_SAMPLES: usize = 200;
/// Normalized moment-map size below which the isotropy contract applies.
pub const ISOTROPY_MU_TOL: f64 = 1e-10;
pub const ISOTROPY_CONTRACT: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisRecord {
    pub analysis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WallClock {
    pub started_unix_ms: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub tool_version: String,
    pub scenario_digest: String,
    pub analyses: Vec<AnalysisRecord>,
    /// Violated contracts and failed analyses; empty when everything passed.
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock: Option<WallClock>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without its wall-clock field, for byte comparisons.
    pub fn to_json_without_clock(&self) -> String {
        Report { wall_clock: None, ..self.clone() }.to_json()
    }
}

/// Hex SHA-256 of the canonical scenario text.
pub fn scenario_digest(s: &Scenario) -> String {
    hex::encode(Sha256::digest(s.to_canonical().as_bytes()))
}

/// Run every requested analysis; failures are recorded, never raised.
pub fn run_scenario(s: &Scenario) -> Report {
    let started = Instant::now();
    let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
    let mut analyses = Vec::new();
    let mut violations = Vec::new();
    let context = s.build_representation().and_then(|rep| Ok((rep, s.kn_options()?)));
    for analysis in &s.analyses {
        let name = analysis.name();
        let outcome = match &context {
            Ok((rep, options)) => run_analysis(*analysis, rep, s, options),
            Err(e) => Err(e.clone()),
        };
        match outcome {
            Ok((result, failed)) => {
                violations.extend(failed.into_iter().map(|f| format!("{name}: {f}")));
                analyses.push(AnalysisRecord { analysis: name.into(), result: Some(result), error: None });
            }
            Err(e) => {
                violations.push(format!("{name}: {e}"));
                analyses.push(AnalysisRecord { analysis: name.into(), result: None, error: Some(e.to_string()) });
            }
        }
    }
    Report {
        format_version: FORMAT_VERSION,
        tool_version: TOOL_VERSION.into(),
        scenario_digest: scenario_digest(s),
        analyses,
        violations,
        wall_clock: Some(WallClock { started_unix_ms, elapsed_ms: started.elapsed().as_secs_f64() * 1e3 }),
    }
}

type Outcome = Result<(Value, Vec<String>)>;

fn run_analysis(analysis: Analysis, rep: &Representation, s: &Scenario, options: &KNOptions) -> Outcome {
    match analysis {
        Analysis::Classify => classify(rep, s, options),
        Analysis::Identities => identities(rep, s),
        Analysis::Matsushima => matsushima(rep, s, options),
        Analysis::Luna => luna(rep, s, options),
        Analysis::Stability => stability(rep, s, options),
        Analysis::HilbertMumford => hilbert_mumford(rep, s),
    }
}

fn q(x: &BigRational) -> String {
    format_rational(x)
}

fn exact_json(z: &GaussianRational) -> Value {
    json!([q(&z.re), q(&z.im)])
}

fn float_json(v: &FloatVector) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

fn torus_kind_name(kind: TorusKind) -> &'static str {
    match kind {
        TorusKind::Closed => "Closed",
        TorusKind::SemistableNotClosed => "SemistableNotClosed",
        TorusKind::NullCone => "NullCone",
    }
}

fn one_ps_json(w: &OnePS) -> Value {
    match w {
        OnePS::Torus { lambda } => json!({"type": "one_ps", "lambda": lambda}),
        OnePS::BinaryForm { linear_form, multiplicity } => json!({
            "type": "one_ps",
            "linear_form": [exact_json(&linear_form[0]), exact_json(&linear_form[1])],
            "multiplicity": multiplicity,
        }),
    }
}

fn certificate_json(c: &TorusCertificate) -> Value {
    match c {
        TorusCertificate::Balanced { weights, coefficients } => json!({
            "type": "balanced",
            "weights": weights,
            "coefficients": coefficients.iter().map(q).collect::<Vec<_>>(),
        }),
        TorusCertificate::Cocharacter(lambda) => json!({"type": "cocharacter", "lambda": lambda}),
    }
}

/// Exact oracle verdict with its certificate and re-verification, when one exists.
fn oracle_json(rep: &Representation, v: &ExactVector) -> Result<Option<(Value, bool)>> {
    Ok(match rep.family() {
        Family::Torus(t) => {
            let verdict = torus_orbit_oracle(t, v)?;
            let verified = verdict.verify(&support_weights(t, v, 0.0)?);
            Some((
                json!({
                    "kind": torus_kind_name(verdict.kind),
                    "certificate": certificate_json(&verdict.certificate),
                    "verified": verified,
                }),
                verified,
            ))
        }
        Family::BinaryForm(b) => {
            let verdict = sl2_form_oracle(b.degree(), v.entries())?;
            let verified = verdict.witness.as_ref().is_none_or(|w| verify_sl2_witness(v.entries(), w));
            Some((
                json!({
                    "kind": torus_kind_name(verdict.kind),
                    "multiplicities": verdict.multiplicities,
                    "witness": verdict.witness.as_ref().map(one_ps_json),
                    "verified": verified,
                }),
                verified,
            ))
        }
        Family::Custom(_) => None,
    })
}

fn witness_json(rep: &Representation, w: &Witness) -> Result<Value> {
    Ok(match w {
        Witness::MuZeroPoint(p) => json!({
            "type": "mu_zero_point",
            "point": float_json(&rep.user_coordinates(p)?),
            "mu_norm": moment_map(rep, p)?.norm(),
        }),
        Witness::CollapseTrajectory(t) => {
            let first = t.iterates.first().map(|i| i.value).unwrap_or(0.0);
            json!({
                "type": "collapse_trajectory",
                "iterations": t.iterates.len() - 1,
                "final_norm_ratio": (t.last().value / first.max(f64::MIN_POSITIVE)).sqrt(),
            })
        }
        Witness::DestabilizingOnePS(o) => one_ps_json(o),
        Witness::None => Value::Null,
    })
}

fn trajectory_json(verdict: &OrbitVerdict) -> Value {
    match &verdict.trajectory {
        Some(t) => json!({
            "terminal_reason": t.terminal_reason,
            "iterations": t.iterates.len() - 1,
            "initial_norm_sqr": t.iterates[0].value,
            "final_norm_sqr": t.last().value,
            "final_mu_norm": t.last().mu_norm,
        }),
        None => Value::Null,
    }
}

fn classify(rep: &Representation, s: &Scenario, options: &KNOptions) -> Outcome {
    let v = s.exact_vector();
    let verdict = classify_orbit(rep, &v, options)?;
    let oracle = oracle_json(rep, &v)?;
    let mut violations = Vec::new();
    let mut witness = witness_json(rep, &verdict.witness)?;
    if witness.is_null() {
        if let Some((o, _)) = &oracle {
            witness = match o.get("certificate") {
                Some(c) => c.clone(),
                None => json!({"type": "root_multiplicities", "multiplicities": o["multiplicities"]}),
            };
        }
    }
    if verdict.kind != VerdictKind::Inconclusive && witness.is_null() {
        violations.push("verdict carries no witness".to_string());
    }
    if let Some((_, false)) = &oracle {
        violations.push("oracle certificate failed re-verification".to_string());
    }
    let result = json!({
        "kind": verdict.kind,
        "source": verdict.source,
        "witness": witness,
        "trajectory": trajectory_json(&verdict),
        "oracle": oracle.map(|(o, _)| o),
    });
    Ok((result, violations))
}

fn identities(rep: &Representation, s: &Scenario) -> Outcome {
    let r = identity_probes(rep, s.options.probes.unwrap_or(DEFAULT_PROBES), s.options.seed.unwrap_or(0))?;
    Ok((serde_json::to_value(&r).expect("serializable"), r.violations()))
}

fn matsushima(rep: &Representation, s: &Scenario, options: &KNOptions) -> Outcome {
    let v = s.exact_vector();
    let verdict = classify_orbit(rep, &v, options)?;
    let mut violations = Vec::new();
    let result = match (&verdict.kind, &verdict.witness) {
        (VerdictKind::Closed, Witness::MuZeroPoint(w)) => {
            let report = matsushima_check(rep, w, STABILIZER_TOL)?;
            let isotropy = isotropic_check(rep, w)?;
            let normalized = report.mu_norm / w.norm_sqr().max(f64::MIN_POSITIVE);
            if !report.real_form_holds {
                violations.push(format!(
                    "stabilizer dimensions differ at a moment-map zero (complex {}, compact {})",
                    report.dim_c_gv, report.dim_r_kv
                ));
            }
            if normalized <= ISOTROPY_MU_TOL && isotropy > ISOTROPY_CONTRACT {
                violations.push(format!("isotropy residual {isotropy:e} exceeds {ISOTROPY_CONTRACT:e}"));
            }
            json!({"evaluated_at": "moment_zero", "orbit": verdict.kind, "stabilizer": report, "isotropy": isotropy})
        }
        _ => {
            let point = rep.embed(&v)?;
            let report = matsushima_check(rep, &point, KERNEL_TOL)?;
            let isotropy = isotropic_check(rep, &point)?;
            json!({"evaluated_at": "input", "orbit": verdict.kind, "stabilizer": report, "isotropy": isotropy})
        }
    };
    Ok((result, violations))
}

fn subgroup(rep: &Representation, s: &Scenario, analysis: &str) -> Result<crate::criteria::SubgroupData> {
    s.options
        .subgroup
        .as_ref()
        .ok_or_else(|| Error::Format(format!("analysis `{analysis}` needs `options.subgroup`")))?
        .build(rep)
}

fn luna(rep: &Representation, s: &Scenario, options: &KNOptions) -> Outcome {
    let h = subgroup(rep, s, "luna")?;
    let v = s.exact_vector();
    let point = rep.embed(&v)?;
    let restriction = luna_restriction_check(rep, &h, &point)?;
    let tangent = luna_tangent_check(rep, &h, &point)?;
    let orbit = classify_orbit(rep, &v, options)?;
    let mut violations = Vec::new();
    if !restriction.passes() {
        violations.push(format!(
            "restriction residuals {:e}, {:e} exceed contract",
            restriction.complement_max_pairing, restriction.restricted_residual
        ));
    }
    if !tangent.passes() {
        violations.push(format!("tangent spaces differ (dims {} and {})", tangent.dim_s1, tangent.dim_s2));
    }
    let result = json!({
        "orbit": orbit.kind,
        "orbit_source": orbit.source,
        "trajectory": trajectory_json(&orbit),
        "restriction": restriction,
        "tangent": tangent,
    });
    Ok((result, violations))
}

fn stability(rep: &Representation, s: &Scenario, options: &KNOptions) -> Outcome {
    let h = subgroup(rep, s, "stability")?;
    let v0 = rep.embed(&s.exact_vector())?;
    let points: Vec<ExactVector> =
        s.options.special_points.iter().map(|p| p.point.iter().map(|z| z.0.clone()).collect()).collect();
    let report = stability_sampler(
        rep,
        &v0,
        &h,
        &points,
        s.options.samples.unwrap_or(DEFAULT_SAMPLES),
        s.options.seed.unwrap_or(0),
        options,
    )?;
    let mut violations = Vec::new();
    if !report.all_closed() {
        violations.push(format!("{} sampled orbits are not closed", report.exceptions.len()));
    }
    for (i, (p, kind)) in s.options.special_points.iter().zip(&report.special_points).enumerate() {
        if let Some(expected) = p.expected {
            if !expected.matches(*kind) {
                violations.push(format!("special point {i} classified {kind:?}, expected {expected:?}"));
            }
        }
    }
    Ok((serde_json::to_value(&report).expect("serializable"), violations))
}

fn hilbert_mumford(rep: &Representation, s: &Scenario) -> Outcome {
    let v = s.exact_vector();
    let (oracle, verified) = oracle_json(rep, &v)?.ok_or_else(|| {
        Error::Format("analysis `hilbert-mumford` needs a torus or binary form representation".into())
    })?;
    let mut violations = Vec::new();
    if !verified {
        violations.push("oracle certificate failed re-verification".to_string());
    }
    let Family::Torus(t) = rep.family() else {
        return Ok((json!({ "oracle": oracle }), violations));
    };
    let searched = find_destabilizing_1ps(t, &v)?;
    let lambda = match (&s.options.lambda, &searched) {
        (Some(l), _) => Some(l.clone()),
        (None, Some(OnePS::Torus { lambda })) => Some(lambda.clone()),
        _ => None,
    };
    let Some(lambda) = lambda else {
        return Ok((json!({ "oracle": oracle, "lambda": Value::Null }), violations));
    };
    let dec = weight_decompose(t, &v, &lambda)?;
    let limit = one_ps_limit(&dec);
    let pairing = moment_pairing(t, &v, &lambda)?;
    let residual = pairing_identity_residual(t, &v, &lambda)?;
    if !residual.is_zero() {
        violations.push(format!("pairing identity residual {} is not zero", q(&residual)));
    }
    let moves = limit.as_ref().map(|l| *l != v);
    if let Some(moves) = moves {
        // A limit forces a nonnegative pairing, zero exactly when nothing moves.
        let consistent = pairing >= BigRational::zero() && (pairing.is_zero() == !moves);
        if !consistent {
            violations.push("limit and moment pairing are inconsistent".to_string());
        }
    }
    if s.options.lambda.is_none() && moves != Some(true) {
        violations.push("searched cocharacter has no limit that moves the vector".to_string());
    }
    let components: serde_json::Map<String, Value> = dec
        .components()
        .iter()
        .map(|(m, c)| (m.to_string(), Value::Array(c.iter().map(exact_json).collect())))
        .collect();
    let result = json!({
        "oracle": oracle,
        "lambda": lambda,
        "components": components,
        "limit": limit.as_ref().map(|l| Value::Array(l.iter().map(exact_json).collect())),
        "limit_moves_vector": moves,
        "moment_pairing": q(&pairing),
        "pairing_residual": q(&residual),
    });
    Ok((result, violations))
}
