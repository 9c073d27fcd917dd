use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::game::Game;
use crate::num::Rational;
use crate::profile::CorrelatedProfile;

/// The hand-made example games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    /// 4×2 game where partial observability sits strictly between full
    /// commitment and none.
    Commitment4x2,
    /// Rock-paper-scissors variant where matching the opponent loses.
    Shapley,
    /// 5×4 game where a mediator beats every uncorrelated profile.
    Signaling5x4,
    /// 6×4 game whose mediated optimum is fragile under weaker signaling.
    WeakSignaling6x4,
}

impl Example {
    pub const ALL: [Example; 4] =
        [Example::Commitment4x2, Example::Shapley, Example::Signaling5x4, Example::WeakSignaling6x4];

    pub fn name(self) -> &'static str {
        match self {
            Example::Commitment4x2 => "EXAMPLE_2x4",
            Example::Shapley => "SHAPLEY",
            Example::Signaling5x4 => "SIGNALING_5x4",
            Example::WeakSignaling6x4 => "WEAKSIG_6x4",
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = Error;

    /// Accepts the canonical names case-insensitively, with `-` or `_`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Example::ALL
            .into_iter()
            .find(|e| e.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

fn labels(names: &str) -> Vec<String> {
    names.chars().map(String::from).collect()
}

fn build(u1: &[&[i64]], u2: &[&[i64]], partition: Vec<Vec<usize>>, rows: &str, cols: &str) -> Game {
    Game::from_ints(u1, u2, partition)
        .and_then(|g| g.with_labels(labels(rows), labels(cols)))
        .expect("example games are well formed")
}

/// Builds one of the example games with its intended partition.
pub fn gen_example(example: Example) -> Game {
    match example {
        Example::Commitment4x2 => build(
            &[&[7, 2], &[6, 0], &[5, 0], &[4, 1]],
            &[&[0, 1], &[1, 0], &[0, 1], &[1, 0]],
            vec![vec![0, 1], vec![2, 3]],
            "abcd",
            "AB",
        ),
        Example::Shapley => build(
            &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]],
            &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]],
            vec![vec![0, 1, 2]],
            "abc",
            "ABC",
        ),
        Example::Signaling5x4 => build(
            &[&[0, 12, 0, 0], &[0, 0, 12, 0], &[12, 0, 0, 0], &[5, 5, 5, 0], &[7, 7, 7, 1]],
            &[&[0, 0, 1, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 1]],
            vec![vec![0, 1, 2, 3], vec![4]],
            "abcde",
            "ABCD",
        ),
        Example::WeakSignaling6x4 => build(
            &[&[1, 4, 1, 1], &[1, 1, 4, 1], &[4, 1, 1, 1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]],
            &[&[0, 0, 1, 1], &[1, 0, 0, 1], &[0, 1, 0, 1], &[1, 1, 0, 0], &[0, 1, 1, 0], &[1, 0, 1, 0]],
            vec![vec![0, 1, 2], vec![3, 4, 5]],
            "abcdef",
            "ABCD",
        ),
    }
}

/// The optimal mediated profile of [`Example::Signaling5x4`]: nine atoms of
/// mass 1/9.
pub fn signaling_profile() -> CorrelatedProfile<Rational> {
    let atoms = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (4, 0), (4, 1), (4, 2)];
    CorrelatedProfile::uniform_over(5, 4, &atoms).expect("atoms in range")
}

/// The optimal mediated profile of [`Example::WeakSignaling6x4`]: nine
/// atoms of mass 1/9.
pub fn weak_signaling_profile() -> CorrelatedProfile<Rational> {
    let atoms = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (3, 0), (4, 1), (5, 2)];
    CorrelatedProfile::uniform_over(6, 4, &atoms).expect("atoms in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Field;

    #[test]
    fn tables_and_partitions() {
        let g = gen_example(Example::Commitment4x2);
        assert_eq!(*g.u1().get(0, 0), Rational::from_int(7));
        assert_eq!(*g.u2().get(0, 0), Rational::from_int(0));
        assert_eq!(g.partition().to_string(), "{{0,1}, {2,3}}");

        let g = gen_example(Example::Signaling5x4);
        assert_eq!(*g.u1().get(0, 1), Rational::from_int(12));
        assert_eq!(*g.u2().get(4, 3), Rational::from_int(1));
        assert_eq!(g.partition().to_string(), "{{0,1,2,3}, {4}}");

        let g = gen_example(Example::WeakSignaling6x4);
        assert_eq!((g.num_rows(), g.num_cols()), (6, 4));
        assert_eq!(g.partition().to_string(), "{{0,1,2}, {3,4,5}}");
        assert_eq!(g.row_name(5), "f");
    }

    #[test]
    fn names_round_trip() {
        for e in Example::ALL {
            assert_eq!(e.name().parse::<Example>().unwrap(), e);
        }
        assert_eq!("weaksig-6x4".parse::<Example>().unwrap(), Example::WeakSignaling6x4);
        assert!(matches!("nope".parse::<Example>(), Err(Error::UnknownExample(_))));
    }
}
