//! Named random streams derived from a single per-run seed.
//!
//! Each consumer draws from its own ChaCha stream keyed by `(seed, name)`,
//! so introducing a new consumer never shifts the numbers another one sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SPLIT: &str = "split";
pub const INNER_SPLIT: &str = "inner-split";
pub const NEG_SAMPLE: &str = "neg-sample";
pub const SYNTH_TOPOLOGY: &str = "synth-topology";
pub const SYNTH_PARTITION: &str = "synth-partition";

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream `name` of the run seeded with `seed`.
pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    salted_stream(seed, name, 0)
}

/// Like [`stream`], with an extra salt for retry loops.
pub fn salted_stream(seed: u64, name: &str, salt: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(fnv1a(name.as_bytes()) ^ splitmix64(salt)));
    ChaCha8Rng::seed_from_u64(key)
}
