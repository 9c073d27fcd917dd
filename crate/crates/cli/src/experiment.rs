//! Average row-player value of random games as a function of the number
//! of SISes.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use seslo::generators::{game_seed, gen_random};
use seslo::{solve_seslo, Field, Game, Mode, Rational, SisPartition};

/// Sizes swept when none are given.
pub const DEFAULT_SIZES: [(usize, usize); 3] = [(4, 4), (6, 6), (4, 8)];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sizes: Vec<(usize, usize)>,
    pub games_per_point: usize,
    /// `None` sweeps `1..=m` for every size.
    pub sis_counts: Option<Vec<usize>>,
    pub seed: u64,
    pub mode: Mode,
    /// Evaluate games on the rayon pool; the output does not depend on it.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sizes: DEFAULT_SIZES.to_vec(),
            games_per_point: 1000,
            sis_counts: None,
            seed: 0,
            mode: Mode::Float,
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    fn sis_counts_for(&self, m: usize) -> Vec<usize> {
        self.sis_counts.clone().unwrap_or_else(|| (1..=m).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            bail!("no game sizes given");
        }
        if self.games_per_point == 0 {
            bail!("games per point must be at least 1");
        }
        for &(m, n) in &self.sizes {
            if m == 0 || n == 0 {
                bail!("game size {m}x{n} is empty");
            }
            for k in self.sis_counts_for(m) {
                if k == 0 || k > m {
                    bail!("SIS count {k} is outside 1..={m} for {m}x{n} games");
                }
            }
        }
        Ok(())
    }
}

/// Per-game values of one `(m, n, sis_count)` point, indexed by game.
#[derive(Debug, Clone, PartialEq)]
pub struct PointValues {
    pub m: usize,
    pub n: usize,
    pub sis_count: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub m: usize,
    pub n: usize,
    pub sis_count: usize,
    pub games: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single game.
    pub std: f64,
    pub seed: u64,
}

fn seslo_value(game: &Game, mode: Mode) -> seslo::Result<f64> {
    Ok(match mode {
        Mode::Exact => solve_seslo::<Rational>(game)?.value.to_f64(),
        Mode::Float => solve_seslo::<f64>(game)?.value,
    })
}

/// Values of game `index` for every SIS count; the payoffs are shared and
/// only the round-robin partition changes.
fn evaluate_game(config: &ExperimentConfig, m: usize, n: usize, counts: &[usize], index: usize) -> Result<Vec<f64>> {
    let seed = game_seed(config.seed, m, n, index);
    let context = || format!("{m}x{n} game {index} (seed {seed})");
    let base = gen_random(m, n, 1, seed).with_context(context)?;
    counts
        .iter()
        .map(|&k| {
            let game = base.with_partition(SisPartition::round_robin(m, k)?)?;
            seslo_value(&game, config.mode)
        })
        .collect::<seslo::Result<Vec<f64>>>()
        .with_context(context)
}

/// Solves every game of the sweep and returns the values grouped by point,
/// in the order sizes, then SIS counts.
pub fn per_game_values(config: &ExperimentConfig) -> Result<Vec<PointValues>> {
    config.validate()?;
    let mut points = Vec::new();
    for &(m, n) in &config.sizes {
        let counts = config.sis_counts_for(m);
        let eval = |i: usize| evaluate_game(config, m, n, &counts, i);
        // Collecting an indexed range keeps game order regardless of which
        // thread finishes first.
        let per_game: Vec<Vec<f64>> = if config.parallel {
            (0..config.games_per_point).into_par_iter().map(eval).collect::<Result<_>>()?
        } else {
            (0..config.games_per_point).map(eval).collect::<Result<_>>()?
        };
        for (j, &k) in counts.iter().enumerate() {
            points.push(PointValues { m, n, sis_count: k, values: per_game.iter().map(|v| v[j]).collect() });
        }
    }
    Ok(points)
}

pub fn summarize(point: &PointValues, seed: u64) -> ExperimentRow {
    let count = point.values.len();
    let mean = point.values.iter().sum::<f64>() / count as f64;
    let std = if count > 1 {
        let ss: f64 = point.values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    ExperimentRow { m: point.m, n: point.n, sis_count: point.sis_count, games: count, mean, std, seed }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    Ok(per_game_values(config)?.iter().map(|p| summarize(p, config.seed)).collect())
}
