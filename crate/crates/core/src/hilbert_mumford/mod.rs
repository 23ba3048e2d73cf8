//! One-parameter subgroups, weight decompositions and exact orbit oracles.

mod binary;
mod brute_force;
mod poly;
pub mod simplex;
mod torus;
mod weights;

pub use binary::{frame_for, sl2_form_oracle, substitute, verify_sl2_witness, Sl2Verdict};
pub use brute_force::{sl2_brute_force_oracle, BruteForceKind, BruteForceVerdict, RANDOM_FRAMES};
pub use poly::{square_free_decomposition, Poly};
pub use torus::{
    find_destabilizing_1ps, support_weights, torus_orbit_oracle, verdict_for_support, OnePS, TorusCertificate,
    TorusKind, TorusVerdict, SEARCH_LIMIT,
};
pub use weights::{moment_pairing, one_ps_limit, pairing_identity_residual, weight_decompose, WeightDecomposition};
