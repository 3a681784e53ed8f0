//! Deterministic stream derivation.
//!
//! Every trial owns a ChaCha8 stream per point process, selected by
//! `(seed, trial, process)`. Per-link draws come from a small PCG generator
//! keyed by a hash of the trial key and the ordered node pair, so a link
//! always sees the same blockage, gain and fading however often, and in
//! whatever order, it is queried.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_pcg::Pcg64Mcg;

/// The SplitMix64 finaliser.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Process {
    Pair = 0,
    Transmitters = 1,
    Jammers = 2,
    Eavesdroppers = 3,
}

/// Words reserved per process inside one trial stream.
const PROCESS_SPAN: u128 = 1 << 48;

pub(crate) fn process_rng(seed: u64, trial: u64, process: Process) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng.set_word_pos(process as u64 as u128 * PROCESS_SPAN);
    rng
}

pub(crate) fn trial_key(seed: u64, trial: u64) -> u64 {
    mix(mix(seed) ^ trial.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

pub(crate) fn link_rng(key: u64, from: u64, to: u64) -> Pcg64Mcg {
    let h = mix(key ^ mix(from.wrapping_mul(0xa076_1d64_78bd_642f) ^ to));
    Pcg64Mcg::seed_from_u64(h)
}
