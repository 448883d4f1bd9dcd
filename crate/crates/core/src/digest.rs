//! Platform-independent SHA-256 digests of numeric inputs.

use sha2::{Digest, Sha256};

use crate::zonotope::GeneratorSet;

/// Digest of a generator set: dimension, count and the little-endian bit
/// patterns of every coordinate. The label is not included.
pub fn generators(gs: &GeneratorSet) -> String {
    let mut h = Sha256::new();
    h.update((gs.dim() as u64).to_le_bytes());
    h.update((gs.len() as u64).to_le_bytes());
    for g in gs.generators() {
        for x in g {
            h.update(x.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

pub fn values(xs: &[f64]) -> String {
    let mut h = Sha256::new();
    h.update((xs.len() as u64).to_le_bytes());
    for x in xs {
        h.update(x.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn bytes(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}
