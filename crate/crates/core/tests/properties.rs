mod common;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use orbit_closure::cli::parse_scenario;
use orbit_closure::hilbert_mumford::{
    one_ps_limit, sl2_form_oracle, support_weights, torus_orbit_oracle, verify_sl2_witness, weight_decompose,
    TorusCertificate, TorusKind,
};
use orbit_closure::kempf_ness::{descend, kn_hessian, kn_value, KNOptions};
use orbit_closure::moment::moment_map;
use orbit_closure::representation::{BinaryFormRep, LieElement, Representation, TorusRep};
use orbit_closure::scalar::format_rational;
use orbit_closure::{ExactVector, FloatVector, GaussianRational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn entry() -> impl Strategy<Value = GaussianRational> {
    prop_oneof![
        1 => Just(Complex::new(BigRational::zero(), BigRational::zero())),
        3 => (rational(), rational()).prop_map(|(re, im)| Complex::new(re, im)),
    ]
}

fn torus_and_vector() -> impl Strategy<Value = (TorusRep, ExactVector)> {
    (1usize..=3, 1usize..=8)
        .prop_flat_map(|(r, n)| {
            (prop::collection::vec(prop::collection::vec(-5i64..=5, r), n), prop::collection::vec(entry(), n))
        })
        .prop_map(|(w, v)| (TorusRep::new(w).unwrap(), v.into_iter().collect()))
}

fn torus_vector_lambda() -> impl Strategy<Value = (TorusRep, ExactVector, Vec<i64>)> {
    torus_and_vector().prop_flat_map(|(t, v)| {
        let r = t.rank();
        (Just(t), Just(v), prop::collection::vec(-3i64..=3, r))
    })
}

fn binary_form() -> impl Strategy<Value = Vec<GaussianRational>> {
    (1usize..=6)
        .prop_flat_map(|d| prop::collection::vec(entry(), d + 1))
        .prop_filter("nonzero form", |f| f.iter().any(|c| !c.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn descent_never_increases_the_norm((t, v) in torus_and_vector()) {
        let rep = Representation::torus(t);
        let traj = descend(&rep, &rep.embed(&v).unwrap(), &KNOptions { max_iters: 200, ..KNOptions::default() });
        // Underflow or iteration limits are fine; the values seen must still descend.
        if let Ok(traj) = traj {
            for pair in traj.iterates.windows(2) {
                prop_assert!(pair[1].value <= pair[0].value * (1.0 + 1e-12), "{} > {}", pair[1].value, pair[0].value);
            }
        }
    }

    #[test]
    fn weight_decomposition_reassembles_exactly((t, v, lambda) in torus_vector_lambda()) {
        let dec = weight_decompose(&t, &v, &lambda).unwrap();
        prop_assert_eq!(dec.reassemble(), v.clone());
        prop_assert!(dec.max_cross_inner().is_zero());
        for (m, c) in dec.components() {
            for (i, z) in c.iter().enumerate() {
                prop_assert!(z.is_zero() || t.int_pairing(i, &lambda) == *m);
            }
        }
        if let Some(limit) = one_ps_limit(&dec) {
            for (i, z) in limit.iter().enumerate() {
                let expect = if t.int_pairing(i, &lambda) == 0 { v.entries()[i].clone() } else { Complex::zero() };
                prop_assert_eq!(z, &expect);
            }
        }
    }

    #[test]
    fn torus_certificates_are_sound((t, v) in torus_and_vector()) {
        let verdict = torus_orbit_oracle(&t, &v).unwrap();
        let support = support_weights(&t, &v, 0.0).unwrap();
        match verdict.certificate {
            TorusCertificate::Balanced { weights, coefficients } => {
                prop_assert_eq!(verdict.kind, TorusKind::Closed);
                prop_assert_eq!(&weights, &support);
                prop_assert!(coefficients.iter().all(|c| c.is_positive()) || support.is_empty());
                if !support.is_empty() {
                    prop_assert_eq!(coefficients.iter().fold(BigRational::zero(), |a, c| a + c), BigRational::one());
                }
                for j in 0..t.rank() {
                    let s = weights.iter().zip(&coefficients).fold(BigRational::zero(), |a, (w, c)| a + c * BigRational::from_integer(w[j].into()));
                    prop_assert!(s.is_zero());
                }
            }
            TorusCertificate::Cocharacter(lambda) => {
                prop_assert_ne!(verdict.kind, TorusKind::Closed);
                let pairings: Vec<i64> = support.iter().map(|w| w.iter().zip(&lambda).map(|(a, b)| a * b).sum()).collect();
                prop_assert!(pairings.iter().all(|p| *p >= 0));
                prop_assert!(pairings.iter().any(|p| *p > 0));
                if verdict.kind == TorusKind::NullCone {
                    prop_assert!(pairings.iter().all(|p| *p > 0));
                }
            }
        }
    }

    #[test]
    fn sl2_witnesses_divide_the_form(f in binary_form()) {
        let d = f.len() - 1;
        let verdict = sl2_form_oracle(d, &f).unwrap();
        prop_assert_eq!(verdict.multiplicities.iter().sum::<u32>() as usize, d);
        let top = verdict.multiplicities[0] as usize;
        // A root of multiplicity d/2 leaves the orbit closed only when the
        // other root takes the remaining half.
        let kind = if 2 * top > d {
            TorusKind::NullCone
        } else if 2 * top == d && verdict.multiplicities.len() > 2 {
            TorusKind::SemistableNotClosed
        } else {
            TorusKind::Closed
        };
        prop_assert_eq!(verdict.kind, kind);
        if let Some(w) = &verdict.witness {
            prop_assert!(verify_sl2_witness(&f, w));
        }
    }

    #[test]
    fn scenarios_round_trip((t, v) in torus_and_vector(), seed in any::<u64>(), tol in rational()) {
        let weights = serde_json::to_string(t.weights()).unwrap();
        let vector: Vec<[String; 2]> = v.iter().map(|z| [format_rational(&z.re), format_rational(&z.im)]).collect();
        let tol = format_rational(&(tol.abs() + BigRational::new(1.into(), 1000.into())));
        let text = format!(
            r#"{{"representation":{{"type":"torus","rank":{},"weights":{weights}}},"vector":{},"analyses":["classify","identities"],"options":{{"seed":{seed},"kn":{{"tol_mu":"{tol}"}}}}}}"#,
            t.rank(),
            serde_json::to_string(&vector).unwrap()
        );
        let s = parse_scenario(&text).unwrap();
        let canon = s.to_canonical();
        let again = parse_scenario(&canon).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(again.to_canonical(), canon);
        prop_assert_eq!(s.exact_vector(), v);
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> FloatVector {
    let v = common::exact_vector(rng, n).to_float();
    let norm = v.norm();
    if norm == 0.0 {
        FloatVector::basis(n, 0)
    } else {
        v.scale_real(&(1.0 / norm))
    }
}

#[test]
fn hessian_matches_second_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let reps = [
        Representation::binary_form(BinaryFormRep::new(3).unwrap()).unwrap(),
        Representation::binary_form(BinaryFormRep::new(6).unwrap()).unwrap(),
        Representation::torus(TorusRep::new(vec![vec![1, 2], vec![-1, 0], vec![3, -2]]).unwrap()),
    ];
    let h = 1e-4;
    for rep in &reps {
        let m = rep.algebra_dim();
        let v = random_unit(&mut rng, rep.dim());
        let hess = kn_hessian(rep, &v).unwrap();
        let f = |p: Vec<f64>| kn_value(rep, &LieElement::hermitian(p), &v).unwrap();
        for j in 0..m {
            for k in 0..m {
                let at = |sj: f64, sk: f64| {
                    let mut p = vec![0.0; m];
                    p[j] += sj * h;
                    p[k] += sk * h;
                    f(p)
                };
                let fd = (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) / (4.0 * h * h);
                assert!(
                    (fd - hess[(j, k)]).abs() < 1e-5 * (1.0 + hess[(j, k)].abs()),
                    "({j},{k}) {fd} vs {}",
                    hess[(j, k)]
                );
            }
        }
    }
}

#[test]
fn moment_zero_is_a_critical_point_of_the_norm() {
    // (xy)^2 is balanced: first derivatives of the orbit norm vanish there.
    let rep = Representation::binary_form(BinaryFormRep::new(4).unwrap()).unwrap();
    let v: ExactVector = [0, 0, 1, 0, 0].iter().map(|&c| orbit_closure::scalar::gaussian_int(c, 0)).collect();
    let y = rep.embed(&v).unwrap();
    assert!(moment_map(&rep, &y).unwrap().norm() < 1e-14);
    let h = 1e-5;
    for j in 0..rep.algebra_dim() {
        let mut p = vec![0.0; rep.algebra_dim()];
        p[j] = h;
        let plus = kn_value(&rep, &LieElement::hermitian(p.clone()), &y).unwrap();
        p[j] = -h;
        let minus = kn_value(&rep, &LieElement::hermitian(p), &y).unwrap();
        assert!(((plus - minus) / (2.0 * h)).abs() < 1e-8);
    }
}
