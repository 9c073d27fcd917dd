use super::selo::{support_enumeration, Search, DEFAULT_SIZE_LIMIT};
use super::{check_scale, Concept, SolveReport};
use crate::error::Result;
use crate::game::{Game, SisPartition};
use crate::num::Field;

/// Nash equilibrium maximizing the row player's utility, by support
/// enumeration: for every support pair, the column player's strategies on
/// the support that make the row support optimal form a polytope, and the
/// best row strategy against each of its vertices is one LP.
pub fn solve_best_nash<F: Field>(game: &Game, allow_large: bool) -> Result<SolveReport<F>> {
    check_scale(game, DEFAULT_SIZE_LIMIT, allow_large)?;
    let one_cell = game.with_partition(SisPartition::one_cell(game.num_rows()))?;
    let mut search = Search::new(None);
    support_enumeration(&one_cell.payoffs::<F>(), one_cell.partition(), &mut search);
    search.finish(&one_cell, Concept::BestNash)
}
