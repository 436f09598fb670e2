//! Seeded input generators.
//!
//! All randomness comes from counter-based SplitMix64: the `c`-th word of
//! the stream for `seed` is
//!
//! ```text
//! z = seed + (c + 1) * 0x9E3779B97F4A7C15          (wrapping u64)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! word(seed, c) = z ^ (z >> 31)
//! ```
//!
//! which is exactly the output sequence of a SplitMix64 generator seeded
//! with `seed`. Item `i` of a buffer only reads the words listed for its
//! distribution below, so buffers can be regenerated piecewise and by other
//! implementations.

use std::fmt;
use std::str::FromStr;

use crate::item::Key;

pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Word `counter` of the SplitMix64 stream seeded with `seed`.
#[inline]
pub fn stream_word(seed: u64, counter: u64) -> u64 {
    splitmix64_mix(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Number of ranks of the zipf generator.
pub const ZIPF_RANKS: u32 = 1 << 20;
/// Spike values of the bucket-killer generator: `(2t + 1) << 28`, `t < 8`.
pub const KILLER_SPIKES: [Key; 8] = [
    1 << 28,
    3 << 28,
    5 << 28,
    7 << 28,
    9 << 28,
    11 << 28,
    13 << 28,
    15 << 28,
];
/// Number of blocks of the staggered generator.
pub const STAGGER_BLOCKS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Distribution {
    /// `word(i) >> 32`.
    Uniform,
    /// Bell-shaped: mean of the high halves of words `4i..4i+4`
    /// (Irwin–Hall with four terms, integer arithmetic only).
    Gaussian,
    /// Rank `r = floor((ZIPF_RANKS + 1)^u)` clamped to `1..=ZIPF_RANKS`,
    /// with `u = (word(i) >> 11) / 2^53`; the key is the rank. Density of
    /// rank `r` is proportional to `1/r`.
    Zipf,
    /// Uniform keys, sorted ascending.
    Sorted,
    /// Uniform keys, sorted descending.
    Reverse,
    /// Every key equals `word(0) >> 32`.
    AllEqual,
    /// With `w = word(i)`: if `w & 3 != 0` the key is
    /// `KILLER_SPIKES[(w >> 2) & 7]`, else `w >> 32`. Three quarters of the
    /// buffer sits on eight values spread like typical sample points.
    BucketKiller,
    /// The buffer is cut into `STAGGER_BLOCKS` blocks of `n / 32` (the
    /// remainder goes to the last). Block `b` draws `word(i) >> 32` reduced
    /// modulo the width `W = 2^32 / 32` and shifted into window
    /// `2b + 1` for `b < 16`, window `2b - 32` otherwise.
    Staggered,
}

impl Distribution {
    pub const ALL: [Distribution; 8] = [
        Distribution::Uniform,
        Distribution::Gaussian,
        Distribution::Zipf,
        Distribution::Sorted,
        Distribution::Reverse,
        Distribution::AllEqual,
        Distribution::BucketKiller,
        Distribution::Staggered,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Gaussian => "gaussian",
            Distribution::Zipf => "zipf",
            Distribution::Sorted => "sorted",
            Distribution::Reverse => "reverse",
            Distribution::AllEqual => "all-equal",
            Distribution::BucketKiller => "bucket-killer",
            Distribution::Staggered => "staggered",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown distribution '{0}'")]
pub struct UnknownDistribution(pub String);

impl FromStr for Distribution {
    type Err = UnknownDistribution;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownDistribution(s.to_string()))
    }
}

#[inline]
fn high(word: u64) -> Key {
    (word >> 32) as Key
}

fn uniform(n: usize, seed: u64) -> Vec<Key> {
    (0..n as u64).map(|i| high(stream_word(seed, i))).collect()
}

fn zipf_key(word: u64) -> Key {
    let u = (word >> 11) as f64 / (1u64 << 53) as f64;
    let rank = (u * f64::from(ZIPF_RANKS + 1).ln()).exp().floor();
    (rank as u32).clamp(1, ZIPF_RANKS)
}

fn staggered_key(i: usize, n: usize, word: u64) -> Key {
    let width = (1u64 << 32) / STAGGER_BLOCKS as u64;
    let block_len = (n / STAGGER_BLOCKS).max(1);
    let block = (i / block_len).min(STAGGER_BLOCKS - 1);
    let window = if block < STAGGER_BLOCKS / 2 {
        2 * block + 1
    } else {
        2 * block - STAGGER_BLOCKS
    };
    (window as u64 * width + (word >> 32) % width) as Key
}

/// Generates `n` keys. A pure function of its arguments.
pub fn generate(distribution: Distribution, n: usize, seed: u64) -> Vec<Key> {
    match distribution {
        Distribution::Uniform => uniform(n, seed),
        Distribution::Gaussian => (0..n as u64)
            .map(|i| {
                let sum: u64 = (0..4).map(|lane| u64::from(high(stream_word(seed, 4 * i + lane)))).sum();
                (sum / 4) as Key
            })
            .collect(),
        Distribution::Zipf => (0..n as u64).map(|i| zipf_key(stream_word(seed, i))).collect(),
        Distribution::Sorted => {
            let mut keys = uniform(n, seed);
            keys.sort_unstable();
            keys
        }
        Distribution::Reverse => {
            let mut keys = uniform(n, seed);
            keys.sort_unstable_by(|a, b| b.cmp(a));
            keys
        }
        Distribution::AllEqual => vec![high(stream_word(seed, 0)); n],
        Distribution::BucketKiller => (0..n as u64)
            .map(|i| {
                let w = stream_word(seed, i);
                if w & 3 != 0 {
                    KILLER_SPIKES[((w >> 2) & 7) as usize]
                } else {
                    high(w)
                }
            })
            .collect(),
        Distribution::Staggered => (0..n)
            .map(|i| staggered_key(i, n, stream_word(seed, i as u64)))
            .collect(),
    }
}
