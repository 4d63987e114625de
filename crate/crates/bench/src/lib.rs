//! Seeded inputs shared by the benchmarks.

use cremona_core::{DGraph, DWalk, FlagGraph, PolyMap, Result, Ring, RingElem, ZWalk};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z256() -> Ring {
    Ring::residue(256).expect("256 is a valid modulus")
}

/// Cubic map of a random regular point-to-point walk with `steps` X-steps.
pub fn walk_map(ring: Ring, n: usize, steps: usize, seed: u64) -> Result<PolyMap> {
    let mut r = rng(seed);
    let w = DWalk::random(ring, steps, true, &mut r)?;
    DGraph::new(ring, n)?.walk_symbolic(&w)
}

/// Cubic map of a random flag walk of `len` Z-steps.
pub fn zwalk_map(ring: Ring, n: usize, len: usize, seed: u64) -> Result<PolyMap> {
    let mut r = rng(seed);
    let w = ZWalk::random(ring, len, &mut r)?;
    FlagGraph::new(ring, n, true)?.zwalk_symbolic(&w)
}

pub fn random_point(ring: Ring, n: usize, seed: u64) -> Vec<RingElem> {
    let mut r = rng(seed);
    (0..n).map(|_| ring.sample(&mut r)).collect()
}
