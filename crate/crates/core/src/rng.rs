//! Seeded choice vectors. All randomness goes through `ChaCha8Rng`
//! seeded with `seed_from_u64`, so results agree across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` independent fair bits, one per free cell in manifest order.
pub fn random_choices(seed: u64, n: usize) -> Vec<bool> {
    let mut rng = seeded(seed);
    (0..n).map(|_| rng.gen::<bool>()).collect()
}
