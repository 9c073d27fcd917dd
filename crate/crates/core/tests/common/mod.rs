#![allow(dead_code)]

use proptest::prelude::*;
use seslo::num::ratio;
use seslo::{Game, Rational, SisPartition};

pub fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

/// Cells from a label per row, skipping unused labels.
pub fn partition_from_labels(labels: &[usize]) -> SisPartition {
    let m = labels.len();
    let top = labels.iter().copied().max().map_or(0, |l| l + 1);
    let cells: Vec<Vec<usize>> = (0..top)
        .map(|k| (0..m).filter(|&r| labels[r] == k).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    SisPartition::new(cells, m).unwrap()
}

fn int_table(m: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), m)
}

/// Small integer game with a random partition.
pub fn small_game(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Game> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(m, n)| (int_table(m, n), int_table(m, n), proptest::collection::vec(0..m, m)))
        .prop_map(|(u1, u2, labels)| {
            let conv = |t: Vec<Vec<i64>>| -> Vec<Vec<Rational>> {
                t.into_iter().map(|r| r.into_iter().map(|x| q(x, 1)).collect()).collect()
            };
            let part = partition_from_labels(&labels);
            Game::new(conv(u1), conv(u2), part.cells().to_vec()).unwrap()
        })
}

/// A game together with a random refinement of its partition.
pub fn game_with_refinement(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (Game, SisPartition)> {
    small_game(max_rows, max_cols).prop_flat_map(|g| {
        let m = g.num_rows();
        proptest::collection::vec(0..2usize, m).prop_map(move |halves| {
            // split every cell by a coin per row
            let labels: Vec<usize> = (0..m).map(|r| 2 * g.partition().cell_of(r) + halves[r]).collect();
            (g.clone(), partition_from_labels(&labels))
        })
    })
}

/// All probability vectors of length `len` on the `1/k` grid.
pub fn grid(len: usize, k: i64) -> Vec<Vec<Rational>> {
    fn rec(len: usize, left: i64, k: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<Rational>>) {
        if len == 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&x| q(x, k)).collect());
            prefix.pop();
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            rec(len - 1, left - x, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, k, k, &mut Vec::new(), &mut out);
    out
}
