//! Builders for every game family the solvers are exercised on.

mod examples;
mod families;
mod random;
mod x3c;

pub use examples::{gen_example, signaling_profile, weak_signaling_profile, Example};
pub use families::{gen_close_to_full, gen_close_to_none};
pub use random::{gen_random, game_seed};
pub use x3c::{
    gen_planted_x3c, gen_uncoverable_x3c, gen_x3c_game, solve_x3c_bruteforce, X3cInstance,
    X3C_BRUTEFORCE_LIMIT,
};

use crate::error::Result;
use crate::game::{Game, SisPartition};
use crate::num::Rational;

/// A family together with the parameters that pin down one game.
#[derive(Debug, Clone, PartialEq)]
pub enum GameFamilyParams {
    Example(Example),
    X3cReduction(X3cInstance),
    /// `partition` defaults to singletons.
    CloseToFull { n: usize, eps: Rational, partition: Option<SisPartition> },
    /// `partition` defaults to singletons.
    CloseToNone { n: usize, eps: Rational, partition: Option<SisPartition> },
    Random { m: usize, n: usize, sis_count: usize, seed: u64 },
}

impl GameFamilyParams {
    pub fn generate(&self) -> Result<Game> {
        match self {
            GameFamilyParams::Example(e) => Ok(gen_example(*e)),
            GameFamilyParams::X3cReduction(inst) => gen_x3c_game(inst),
            GameFamilyParams::CloseToFull { n, eps, partition } => {
                with_optional_partition(gen_close_to_full(*n, eps)?, partition)
            }
            GameFamilyParams::CloseToNone { n, eps, partition } => {
                with_optional_partition(gen_close_to_none(*n, eps)?, partition)
            }
            GameFamilyParams::Random { m, n, sis_count, seed } => gen_random(*m, *n, *sis_count, *seed),
        }
    }
}

fn with_optional_partition(game: Game, partition: &Option<SisPartition>) -> Result<Game> {
    match partition {
        Some(p) => game.with_partition(p.clone()),
        None => Ok(game),
    }
}
