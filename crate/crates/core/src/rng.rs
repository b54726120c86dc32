//! The single seeded generator all randomized routines draw from.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// A child generator for an independent sub-stream, keyed by a label and
/// integers. Keeps unrelated sampling steps from shifting each other.
pub fn derived(seed: u64, label: &str, keys: &[&[u8]]) -> SeededRng {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(label.as_bytes());
    for k in keys {
        h.update((k.len() as u64).to_le_bytes());
        h.update(k);
    }
    let digest: [u8; 32] = h.finalize().into();
    ChaCha20Rng::from_seed(digest)
}
