//! Small shared helpers.

/// Derives an independent RNG stream from a base seed and a path of stream
/// indices (restart number, family index, instance index, ...). splitmix64
/// keeps the derived streams well separated even for adjacent inputs.
pub fn mix_seed(seed: u64, streams: &[u64]) -> u64 {
    let mut z = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &s in streams {
        z = splitmix64(z.wrapping_add(s).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    }
    splitmix64(z)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
