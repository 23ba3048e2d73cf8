//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use orbit_closure::representation::TorusRep;
use orbit_closure::scalar::gaussian_int;
use orbit_closure::{ExactVector, GaussianRational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.random_range(-9..=9);
    let q: i64 = rng.random_range(1..=9);
    BigRational::new(p.into(), q.into())
}

/// Gaussian-rational vector; each entry is zero with probability 1/4.
pub fn exact_vector(rng: &mut ChaCha8Rng, n: usize) -> ExactVector {
    (0..n)
        .map(|_| {
            if rng.random_bool(0.25) {
                Complex::new(BigRational::from_integer(0.into()), BigRational::from_integer(0.into()))
            } else {
                Complex::new(small_rational(rng), small_rational(rng))
            }
        })
        .collect()
}

/// Torus with rank ≤ 3, dimension ≤ 8, weights in [-5, 5].
pub fn torus(rng: &mut ChaCha8Rng) -> TorusRep {
    let r = rng.random_range(1..=3);
    let n = rng.random_range(1..=8);
    TorusRep::new((0..n).map(|_| (0..r).map(|_| rng.random_range(-5..=5)).collect()).collect()).unwrap()
}

/// Binary form of degree `d` with random Gaussian-rational coefficients.
pub fn binary_form(rng: &mut ChaCha8Rng, d: usize) -> Vec<GaussianRational> {
    loop {
        let f: Vec<GaussianRational> = exact_vector(rng, d + 1).into_entries();
        if f.iter().any(|c| !c.is_zero()) {
            return f;
        }
    }
}

/// Product of random linear forms with random multiplicities summing to `d`,
/// so repeated roots are common.
pub fn factored_binary_form(rng: &mut ChaCha8Rng, d: usize) -> Vec<GaussianRational> {
    let mut f = vec![gaussian_int(1, 0)];
    let mut left = d;
    while left > 0 {
        let m = rng.random_range(1..=left);
        let l = if rng.random_bool(0.2) {
            [gaussian_int(0, 0), gaussian_int(1, 0)]
        } else {
            [
                gaussian_int(rng.random_range(-3..=3), rng.random_range(-3..=3)),
                gaussian_int(rng.random_range(-3..=3), rng.random_range(-3..=3)),
            ]
        };
        if l.iter().all(|c| c.is_zero()) {
            continue;
        }
        for _ in 0..m {
            let mut next = vec![gaussian_int(0, 0); f.len() + 1];
            for (i, c) in f.iter().enumerate() {
                next[i] = next[i].clone() + c.clone() * l[0].clone();
                next[i + 1] = next[i + 1].clone() + c.clone() * l[1].clone();
            }
            f = next;
        }
        left -= m;
    }
    f
}
