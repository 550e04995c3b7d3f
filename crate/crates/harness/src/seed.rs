//! Seed derivation. Every problem draws from its own stream so results do not
//! depend on scheduling or on which other problems run.

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(a ^ splitmix64(b))`.
pub fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ splitmix64(b))
}

/// `mix(mix(master, snr_index), problem_index)`.
pub fn problem_seed(master: u64, snr_index: usize, problem_index: usize) -> u64 {
    mix(mix(master, snr_index as u64), problem_index as u64)
}

/// Sub-stream tags derived from a problem seed.
pub(crate) const TAG_RANDOM_INIT: u64 = 0x5241_4E44;
pub(crate) const TAG_SAMPLING: u64 = 0x5341_4D50;
