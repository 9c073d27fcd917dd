//! Seeded random games.
//!
//! Payoffs come from ChaCha8 seeded with [`rand::SeedableRng::seed_from_u64`]:
//! all of `u1` row-major, then all of `u2` row-major, each a uniform `f64`
//! in `[0, 1)` stored as its exact rational value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::{Game, SisPartition};
use crate::num::rational_from_f64;

/// Random `m × n` game whose rows are dealt round-robin into `sis_count`
/// SISes. The same arguments always give the same game.
pub fn gen_random(m: usize, n: usize, sis_count: usize, seed: u64) -> Result<Game> {
    let partition = SisPartition::round_robin(m, sis_count)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = || -> Result<Vec<Vec<_>>> {
        (0..m)
            .map(|_| (0..n).map(|_| rational_from_f64(rng.random::<f64>())).collect())
            .collect()
    };
    let u1 = table()?;
    let u2 = table()?;
    Game::new(u1, u2, partition.cells().to_vec())
}

/// Seed of game `index` of size `m × n` in a run with `base` seed: the
/// splitmix64 finalizer folded over the four inputs.
pub fn game_seed(base: u64, m: usize, n: usize, index: usize) -> u64 {
    [m as u64, n as u64, index as u64]
        .into_iter()
        .fold(splitmix64(base), |h, x| splitmix64(h ^ x))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
