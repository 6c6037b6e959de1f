//! Deterministic seed derivation and the pseudo-random symbol oracle.
//!
//! Every random stream of a run (traffic, throttles, channel draws, symbol
//! values, repetitions) is keyed off one user-facing seed, so runs are
//! reproducible bit-for-bit and streams stay independent of each other.

use crate::linalg::{FieldElement, PrimeField};
use crate::types::User;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for the stream named `label`, instance `index`.
pub fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    let tag = label.bytes().fold(0xCBF2_9CE4_8422_2325_u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    });
    splitmix64(splitmix64(seed ^ tag).wrapping_add(index))
}

/// Value of fresh symbol `seq` of `user`: a fixed pseudo-random field element,
/// recomputable anywhere without storing a message table.
pub fn symbol_value(field: PrimeField, key: u64, user: User, seq: u64) -> FieldElement {
    let x = splitmix64(key ^ splitmix64(((user.index() as u64) << 62) ^ seq));
    field.reduce(x)
}
