//! Shared helpers for the integration tests: seeded randomness so every run
//! is reproducible.
#![allow(dead_code)] // not every test target uses every helper

use heights_core::field::{Field, FieldElement};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TEST_SEED: u64 = 0x5eed_cafe;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(TEST_SEED)
}

/// A uniformly random element of `F_q`.
pub fn random_elem(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    let mut code = rng.gen_range(0..field.q());
    let mut coeffs = [0u64; 4];
    for slot in coeffs.iter_mut().take(field.d()) {
        *slot = code % field.p();
        code /= field.p();
    }
    FieldElement { c: coeffs }
}
