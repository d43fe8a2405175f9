use alloc::string::String;
use alloc::vec::Vec;

use crate::pairing::ComparisonPair;

/// A pair arranged for presentation to a QE system. Which side holds the
/// passing translation is decided by a per-pair pseudo-random bit so the
/// canonical pass-first storage order leaks nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedPair {
    pub pair_id: String,
    pub source_text: String,
    pub text_a: String,
    pub text_b: String,
    pub a_is_passing: bool,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The side bit for one pair. Depends only on (seed, pair_id), so the same
/// seed reproduces the same presentation on any platform.
pub fn side_bit(seed: u64, pair_id: &str) -> bool {
    splitmix64(seed ^ fnv1a64(pair_id.as_bytes())) & 1 == 1
}

/// Arranges every pair for presentation under the given seed, preserving
/// pair order.
pub fn presentation_order(pairs: &[ComparisonPair], seed: u64) -> Vec<PresentedPair> {
    pairs
        .iter()
        .map(|pair| {
            let flip = side_bit(seed, &pair.pair_id);
            let (a, b) = if flip {
                (&pair.failing, &pair.passing)
            } else {
                (&pair.passing, &pair.failing)
            };
            PresentedPair {
                pair_id: pair.pair_id.clone(),
                source_text: pair.source_text.clone(),
                text_a: a.text.clone(),
                text_b: b.text.clone(),
                a_is_passing: !flip,
            }
        })
        .collect()
}

/// The same presentation with every pair's sides swapped, for antisymmetry
/// checks.
pub fn swap_sides(presented: &[PresentedPair]) -> Vec<PresentedPair> {
    presented
        .iter()
        .map(|p| PresentedPair {
            pair_id: p.pair_id.clone(),
            source_text: p.source_text.clone(),
            text_a: p.text_b.clone(),
            text_b: p.text_a.clone(),
            a_is_passing: !p.a_is_passing,
        })
        .collect()
}
