//! Counter-based random substreams.
//!
//! Every draw in the lab comes from a ChaCha20 stream keyed by
//! `(seed, purpose)` and positioned by `trial`. Streams share no state, so a
//! trial produces the same numbers regardless of which worker runs it or in
//! what order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// What a substream is used for; distinct purposes never share key material.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Lattice = 1,
    Sphere = 2,
    LimitLaw = 3,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream(seed: u64, trial: u64, purpose: Purpose) -> ChaCha20Rng {
    let mut state = seed ^ (purpose as u64).wrapping_mul(0xD134_2543_DE82_EF95);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha20Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}
