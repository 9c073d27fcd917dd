//! Optimal committed profiles.
//!
//! | concept | profile | partition used | method |
//! |---|---|---|---|
//! | SESLO | correlated | the game's | one LP |
//! | SELO | mixed | the game's | hyperplane arrangement or support enumeration |
//! | STACKELBERG | mixed | singletons | one LP per column |
//! | BEST_NASH | mixed | one cell | support enumeration |
//! | MAX_CE | correlated | one cell | one LP |
//!
//! Each report's witness is re-checked by the matching verifier.

mod nash;
mod report;
mod selo;
mod seslo;
mod stackelberg;

pub use nash::solve_best_nash;
pub use report::{Concept, SearchStats, SolveReport, Witness};
pub use selo::{solve_selo, SeloOptions, SeloStrategy, DEFAULT_SIZE_LIMIT};
pub use seslo::{solve_max_ce, solve_seslo};
pub use stackelberg::solve_stackelberg;

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hasher};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::lp::same_point;
use crate::num::Field;

fn check_scale(game: &Game, limit: usize, allow_large: bool) -> Result<()> {
    let (m, n) = (game.num_rows(), game.num_cols());
    if !allow_large && m + n > limit {
        return Err(Error::ScaleGuardExceeded { rows: m, cols: n, limit });
    }
    Ok(())
}

/// Set of points, exact in exact mode and up to tolerance in float mode.
struct PointSet<F> {
    buckets: HashMap<u64, Vec<Vec<F>>>,
}

impl<F: Field> PointSet<F> {
    fn new() -> Self {
        Self { buckets: HashMap::new() }
    }

    /// Inserts `x`; false if an equal point is already present.
    fn insert(&mut self, x: &[F]) -> bool {
        let mut h = DefaultHasher::new();
        for v in x {
            v.hash_key(&mut h);
        }
        let bucket = self.buckets.entry(h.finish()).or_default();
        if bucket.iter().any(|y| same_point(y, x)) {
            return false;
        }
        bucket.push(x.to_vec());
        true
    }
}
