//! Exact cover by 3-sets and its reduction to partially observable games.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::num::{Field, Rational};

/// Largest subset count [`solve_x3c_bruteforce`] accepts.
pub const X3C_BRUTEFORCE_LIMIT: usize = 20;

/// Elements `0..m` (with `3 | m`) and a nonempty list of triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3cInstance {
    m: usize,
    subsets: Vec<[usize; 3]>,
}

impl X3cInstance {
    pub fn new(m: usize, subsets: Vec<[usize; 3]>) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(3) {
            return Err(Error::InvalidInstance(format!("element count {m} is not a positive multiple of 3")));
        }
        if subsets.is_empty() {
            return Err(Error::InvalidInstance("no subsets".into()));
        }
        let mut canonical = Vec::with_capacity(subsets.len());
        for (j, mut s) in subsets.into_iter().enumerate() {
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::InvalidInstance(format!("subset {j} repeats an element")));
            }
            if s[2] >= m {
                return Err(Error::InvalidInstance(format!("subset {j} has element {} >= {m}", s[2])));
            }
            canonical.push(s);
        }
        Ok(Self { m, subsets: canonical })
    }

    pub fn num_elements(&self) -> usize {
        self.m
    }

    pub fn subsets(&self) -> &[[usize; 3]] {
        &self.subsets
    }
}

/// Whether `m/3` pairwise disjoint subsets cover every element.
///
/// Backtracks on the smallest uncovered element, which every cover must
/// contain in exactly one chosen subset.
pub fn solve_x3c_bruteforce(inst: &X3cInstance) -> Result<bool> {
    let k = inst.subsets.len();
    if k > X3C_BRUTEFORCE_LIMIT {
        return Err(Error::ScaleGuardExceeded { rows: k, cols: inst.m, limit: X3C_BRUTEFORCE_LIMIT });
    }
    let masks: Vec<u64> = inst.subsets.iter().map(|s| s.iter().fold(0, |acc, &e| acc | 1 << e)).collect();
    if inst.m > 64 {
        return Err(Error::ScaleGuardExceeded { rows: k, cols: inst.m, limit: 64 });
    }
    let full = if inst.m == 64 { u64::MAX } else { (1u64 << inst.m) - 1 };
    fn cover(covered: u64, full: u64, masks: &[u64]) -> bool {
        if covered == full {
            return true;
        }
        let first = (!covered).trailing_zeros();
        masks
            .iter()
            .filter(|&&mask| mask & (1 << first) != 0 && mask & covered == 0)
            .any(|&mask| cover(covered | mask, full, masks))
    }
    Ok(cover(0, full, &masks))
}

/// The reduction game. Subset `j` contributes the SIS `{2j, 2j+1}` (rows
/// `Tj+` and `Tj-`) and column `j`; element `t` is column `k + t`, where
/// `k` is the number of subsets.
///
/// * row `Tj+` earns `m/3` against column `Tj` and 0 against other subset
///   columns; row `Tj-` earns 1 against every subset column; all rows earn
///   0 against element columns.
/// * the column player earns `m/3 − 1` in every subset column, 0 in element
///   column `t` against `Tj+` with `t ∈ Tj`, and `m/3` in the remaining
///   element cells.
pub fn gen_x3c_game(inst: &X3cInstance) -> Result<Game> {
    let k = inst.subsets.len();
    let third = Rational::from_int((inst.m / 3) as i64);
    let third_minus_one = third.minus(&Rational::one());
    let mut u1 = Vec::with_capacity(2 * k);
    let mut u2 = Vec::with_capacity(2 * k);
    for (j, subset) in inst.subsets.iter().enumerate() {
        let plus1 = (0..k).map(|jj| if jj == j { third.clone() } else { Rational::zero() });
        u1.push(plus1.chain((0..inst.m).map(|_| Rational::zero())).collect::<Vec<_>>());
        u1.push((0..k).map(|_| Rational::one()).chain((0..inst.m).map(|_| Rational::zero())).collect());

        let subset_cols = || (0..k).map(|_| third_minus_one.clone());
        let plus2 = (0..inst.m).map(|t| if subset.contains(&t) { Rational::zero() } else { third.clone() });
        u2.push(subset_cols().chain(plus2).collect::<Vec<_>>());
        u2.push(subset_cols().chain((0..inst.m).map(|_| third.clone())).collect());
    }
    let partition = (0..k).map(|j| vec![2 * j, 2 * j + 1]).collect();
    let rows = (0..k).flat_map(|j| [format!("T{j}+"), format!("T{j}-")]).collect();
    let cols = (0..k).map(|j| format!("T{j}")).chain((0..inst.m).map(|t| format!("t{t}"))).collect();
    Game::new(u1, u2, partition)?.with_labels(rows, cols)
}

fn random_triple(rng: &mut ChaCha8Rng, elements: &[usize]) -> [usize; 3] {
    let picked: Vec<usize> = elements.choose_multiple(rng, 3).copied().collect();
    [picked[0], picked[1], picked[2]]
}

/// A satisfiable instance: a random exact cover of `0..m` plus random
/// distractor triples, shuffled together. `num_subsets` must be at least
/// `m/3`.
pub fn gen_planted_x3c(m: usize, num_subsets: usize, seed: u64) -> Result<X3cInstance> {
    if m == 0 || !m.is_multiple_of(3) || num_subsets < m / 3 {
        return Err(Error::InvalidParams(format!(
            "a planted cover of {m} elements needs m divisible by 3 and at least m/3 subsets, got {num_subsets}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements: Vec<usize> = (0..m).collect();
    elements.shuffle(&mut rng);
    let mut subsets: Vec<[usize; 3]> = elements.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
    elements.sort_unstable();
    while subsets.len() < num_subsets {
        subsets.push(random_triple(&mut rng, &elements));
    }
    subsets.shuffle(&mut rng);
    X3cInstance::new(m, subsets)
}

/// An unsatisfiable instance: random triples that all avoid one randomly
/// chosen element. Needs `m >= 6` so that triples avoiding an element exist
/// alongside the missing one.
pub fn gen_uncoverable_x3c(m: usize, num_subsets: usize, seed: u64) -> Result<X3cInstance> {
    if m < 6 || !m.is_multiple_of(3) || num_subsets == 0 {
        return Err(Error::InvalidParams(format!(
            "an uncoverable instance needs m >= 6 divisible by 3 and a subset, got m={m}, {num_subsets} subsets"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..m).collect();
    let missing = *all.choose(&mut rng).expect("m > 0");
    let allowed: Vec<usize> = all.into_iter().filter(|&e| e != missing).collect();
    let subsets = (0..num_subsets).map(|_| random_triple(&mut rng, &allowed)).collect();
    X3cInstance::new(m, subsets)
}
