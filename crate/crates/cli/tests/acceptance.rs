//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints its PASS/FAIL line; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use seslo::deviation::DeviationPlan;
use seslo::generators::{
    gen_close_to_full, gen_close_to_none, gen_example, gen_planted_x3c, gen_random, gen_uncoverable_x3c, gen_x3c_game,
    signaling_profile, solve_x3c_bruteforce, weak_signaling_profile, Example,
};
use seslo::num::ratio;
use seslo::{
    correlated_utilities, expected_utilities, find_deviation, solve_best_nash, solve_max_ce, solve_selo, solve_seslo,
    solve_stackelberg, verify_mixed, CorrelatedProfile, Field, Game, Matrix, MixedProfile, Mode, Rational, SeloOptions,
    SignalModel, SisPartition,
};
use seslo_cli::experiment::{per_game_values, ExperimentConfig};
use seslo_cli::output::render_csv;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Collects failed checks instead of stopping at the first one.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, summary: String) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!("{summary} ({} checks)", self.count))
        } else {
            let shown: Vec<_> = self.failures.iter().take(5).cloned().collect();
            Err(format!("{} of {} checks failed: {}", self.failures.len(), self.count, shown.join("; ")))
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

fn partition(cells: &[&[usize]], m: usize) -> SisPartition {
    SisPartition::new(cells.iter().map(|c| c.to_vec()).collect(), m).expect("valid partition")
}

fn exact_values() -> Outcome {
    let mut c = Checks::default();
    let mut expect = |label: &str, got: seslo::Result<seslo::SolveReport<Rational>>, want: Rational| {
        match got {
            Ok(r) => c.check(r.value == want && r.verifier_passed, || {
                format!("{label}: got {} (verified {}), want {want}", r.value, r.verifier_passed)
            }),
            Err(e) => c.check(false, || format!("{label}: {e}")),
        }
    };
    let g2 = gen_example(Example::Commitment4x2);
    expect("2x4 SELO", solve_selo(&g2, &SeloOptions::default()), q(7, 2));
    let full = g2.with_partition(SisPartition::singletons(4)).unwrap();
    expect("2x4 Stackelberg", solve_stackelberg(&full), q(13, 2));
    expect("2x4 best Nash", solve_best_nash(&g2, false), q(2, 1));

    let g5 = gen_example(Example::Signaling5x4);
    expect("5x4 SESLO", solve_seslo(&g5), q(19, 3));
    let one = g5.with_partition(SisPartition::one_cell(5)).unwrap();
    expect("5x4 one-cell SESLO", solve_seslo(&one), q(1, 1));
    let abcd_e = g5.with_partition(partition(&[&[0, 1, 2, 3], &[4]], 5)).unwrap();
    expect("5x4 SELO {abcd}{e}", solve_selo(&abcd_e, &SeloOptions::default()), q(1, 1));

    let g6 = gen_example(Example::WeakSignaling6x4);
    expect("6x4 SESLO", solve_seslo(&g6), q(2, 1));
    c.finish("7 example values exact".into())
}

/// Row player's gain when the signal is visible to her: each SIS's mass
/// under signal `c` moves to that SIS's best row against `c`.
fn row_knows_oracle(game: &Game, p: &CorrelatedProfile<Rational>) -> Rational {
    let mut total = q(0, 1);
    for col in 0..game.num_cols() {
        for cell in game.partition().cells() {
            let mass = Rational::sum(cell.iter().map(|&r| p.get(r, col)));
            let best = cell.iter().map(|&r| game.u1().get(r, col)).max().expect("nonempty cell");
            total = total.plus(&mass.times(best));
        }
    }
    total.minus(&correlated_utilities(game, p).unwrap().0)
}

fn deviation_checks() -> Outcome {
    let mut c = Checks::default();
    let g6 = gen_example(Example::WeakSignaling6x4);
    let p6 = weak_signaling_profile();
    let best = find_deviation(&g6, &p6, SignalModel::NoReveal).unwrap();
    c.check(*best.gain() >= q(1, 3), || format!("NO_REVEAL max gain {} < 1/3", best.gain()));

    // Rows a,b,c stay with probability 1/2 and otherwise move to e,f,d;
    // rows d,e,f move to c,a,b.
    let mut d = Matrix::from_fn(6, 6, |_, _| q(0, 1));
    for (r, other) in [(0, 4), (1, 5), (2, 3)] {
        *d.get_mut(r, r) = q(1, 2);
        *d.get_mut(r, other) = q(1, 2);
    }
    for (r, target) in [(3, 2), (4, 0), (5, 1)] {
        *d.get_mut(r, target) = q(1, 1);
    }
    match DeviationPlan::new(&g6, &p6, SignalModel::NoReveal, vec![d]) {
        Ok(plan) => c.check(*plan.gain() == q(1, 3), || format!("explicit plan gains {}", plan.gain())),
        Err(e) => c.check(false, || format!("explicit plan rejected: {e}")),
    }
    let public = find_deviation(&g6, &p6, SignalModel::PublicReveal).unwrap();
    c.check(public.gain().is_zero(), || format!("PUBLIC_REVEAL gain {}", public.gain()));

    let g5 = gen_example(Example::Signaling5x4);
    let p5 = signaling_profile();
    let oracle = row_knows_oracle(&g5, &p5);
    c.check(oracle == q(31, 3).minus(&q(19, 3)), || format!("oracle gives {oracle}, want 4"));
    let rk = find_deviation(&g5, &p5, SignalModel::RowKnowsColumnSignal).unwrap();
    c.check(*rk.gain() == q(4, 1), || format!("ROW_KNOWS gain {}", rk.gain()));
    c.check(*rk.gain() == oracle, || "ROW_KNOWS disagrees with oracle".into());
    c.finish(format!("NO_REVEAL {} (plan 1/3), PUBLIC_REVEAL 0, ROW_KNOWS {}", best.gain(), rk.gain()))
}

fn x3c_reduction() -> Outcome {
    let mut instances = Vec::new();
    for seed in 0..12u64 {
        for k in 1..=5 {
            instances.push(("planted", gen_planted_x3c(3, k, seed)));
        }
        for k in 2..=5 {
            instances.push(("planted", gen_planted_x3c(6, k, 100 + seed)));
        }
        for k in 1..=5 {
            instances.push(("uncoverable", gen_uncoverable_x3c(6, k, 200 + seed)));
        }
    }
    let mut seen = Vec::new();
    let mut unique = Vec::new();
    for (kind, inst) in instances {
        let inst = inst.map_err(|e| format!("generator: {e}"))?;
        if !seen.contains(&inst) {
            seen.push(inst.clone());
            unique.push((kind, inst));
        }
    }
    let results: Vec<Result<(bool, bool, Rational), String>> = unique
        .par_iter()
        .map(|(_, inst)| {
            let coverable = solve_x3c_bruteforce(inst).map_err(|e| e.to_string())?;
            let game = gen_x3c_game(inst).map_err(|e| e.to_string())?;
            let options = SeloOptions { allow_large: true, ..SeloOptions::default() };
            let value = solve_selo::<Rational>(&game, &options).map_err(|e| e.to_string())?.value;
            Ok((coverable, value.is_positive(), value))
        })
        .collect();
    let mut c = Checks::default();
    let (mut pos, mut neg) = (0, 0);
    for ((kind, inst), r) in unique.iter().zip(results) {
        let (coverable, positive, value) = r?;
        if coverable {
            pos += 1;
        } else {
            neg += 1;
        }
        c.check(coverable == positive, || {
            format!("{kind} {:?}: cover {coverable}, SELO value {value}", inst.subsets())
        });
        if coverable {
            c.check(value >= q(1, 1), || format!("{:?}: positive value {value} < 1", inst.subsets()));
        }
        if *kind == "planted" {
            c.check(coverable, || format!("planted instance {:?} has no cover", inst.subsets()));
        }
    }
    c.check(unique.len() >= 50, || format!("only {} distinct instances", unique.len()));
    c.check(pos > 0 && neg > 0, || "one polarity is missing".into());
    c.finish(format!("{} instances ({pos} coverable, {neg} not)", unique.len()))
}

/// Every set partition of `0..m`, as cell lists.
fn all_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::<Vec<usize>>::new()];
    for row in 0..m {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(row);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![row]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn commitment_jumps() -> Outcome {
    let eps = q(1, 10);
    let one_minus = q(1, 1).minus(&eps);
    let mut c = Checks::default();
    for n in [2, 3] {
        let full = gen_close_to_full(n, &eps).unwrap();
        let stack = solve_stackelberg::<Rational>(&full).unwrap().value;
        c.check(stack > one_minus, || format!("close-to-full n={n}: Stackelberg {stack}"));
        for cells in all_partitions(n).into_iter().filter(|p| p.len() < n) {
            let g = full.with_partition(SisPartition::new(cells.clone(), n).unwrap()).unwrap();
            let v = solve_seslo::<Rational>(&g).unwrap().value;
            c.check(v <= eps, || format!("close-to-full n={n} {cells:?}: SESLO {v}"));
        }

        let none = gen_close_to_none(n, &eps).unwrap();
        for cells in all_partitions(n).into_iter().filter(|p| p.len() == 2) {
            let g = none.with_partition(SisPartition::new(cells.clone(), n).unwrap()).unwrap();
            let v = solve_selo::<Rational>(&g, &SeloOptions::default()).unwrap().value;
            c.check(v >= one_minus, || format!("close-to-none n={n} {cells:?}: SELO {v}"));
        }
        let g = none.with_partition(SisPartition::one_cell(n)).unwrap();
        let v = solve_seslo::<Rational>(&g).unwrap().value;
        c.check(v.is_zero(), || format!("close-to-none n={n} one cell: SESLO {v}"));
    }
    c.finish("both families at eps = 1/10, n = 2, 3".into())
}

fn cells_from_labels(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (row, &l) in labels.iter().enumerate() {
        cells.entry(l).or_default().push(row);
    }
    cells.into_values().collect()
}

/// one cell ⊒ coarse ⊒ fine ⊒ singletons, drawn at random.
fn random_chain(m: usize, rng: &mut ChaCha8Rng) -> Vec<SisPartition> {
    let coarse: Vec<usize> = (0..m).map(|_| rng.random_range(0..m)).collect();
    let fine: Vec<usize> = coarse.iter().map(|&l| 2 * l + usize::from(rng.random_bool(0.5))).collect();
    vec![
        SisPartition::one_cell(m),
        SisPartition::new(cells_from_labels(&coarse), m).unwrap(),
        SisPartition::new(cells_from_labels(&fine), m).unwrap(),
        SisPartition::singletons(m),
    ]
}

fn relations_game(m: usize, n: usize, index: u64) -> Result<Vec<String>, String> {
    const TOL: f64 = 1e-7;
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE55 ^ (index << 8) ^ m as u64);
    let base = gen_random(m, n, 1, rng.random()).map_err(|e| e.to_string())?;
    let chain = random_chain(m, &mut rng);
    let mut bad = Vec::new();
    let mut note = |ok: bool, what: String| {
        if !ok {
            bad.push(format!("{m}x{n} game {index}: {what}"));
        }
    };
    let mut seslo = Vec::new();
    let mut selo = Vec::new();
    for p in &chain {
        let g = base.with_partition(p.clone()).map_err(|e| e.to_string())?;
        let s = solve_seslo::<f64>(&g).map_err(|e| e.to_string())?;
        let l = solve_selo::<f64>(&g, &SeloOptions::default()).map_err(|e| e.to_string())?;
        note(s.verifier_passed && l.verifier_passed, format!("witness rejected for {:?}", p.cells()));
        note(s.value >= l.value - TOL, format!("SESLO {} < SELO {} for {:?}", s.value, l.value, p.cells()));
        seslo.push(s.value);
        selo.push(l.value);
    }
    for w in 0..chain.len() - 1 {
        note(seslo[w] <= seslo[w + 1] + TOL, format!("SESLO not monotone: {seslo:?}"));
        note(selo[w] <= selo[w + 1] + TOL, format!("SELO not monotone: {selo:?}"));
    }
    let stack = solve_stackelberg::<f64>(&base).map_err(|e| e.to_string())?;
    let nash = solve_best_nash::<f64>(&base, false).map_err(|e| e.to_string())?;
    let ce = solve_max_ce::<f64>(&base).map_err(|e| e.to_string())?;
    note(stack.verifier_passed && nash.verifier_passed && ce.verifier_passed, "classical witness rejected".into());
    let last = chain.len() - 1;
    note((selo[0] - nash.value).abs() <= TOL, format!("one-cell SELO {} vs Nash {}", selo[0], nash.value));
    note((seslo[0] - ce.value).abs() <= TOL, format!("one-cell SESLO {} vs CE {}", seslo[0], ce.value));
    note((selo[last] - stack.value).abs() <= TOL, format!("singleton SELO {} vs Stackelberg {}", selo[last], stack.value));
    note((seslo[last] - stack.value).abs() <= TOL, format!("singleton SESLO {} vs Stackelberg {}", seslo[last], stack.value));
    Ok(bad)
}

fn solver_relations() -> Outcome {
    let jobs: Vec<(usize, usize, u64)> =
        (0..110).map(|i| (3, 3, i)).chain((0..110).map(|i| (4, 4, i))).collect();
    let results: Vec<_> = jobs.par_iter().map(|&(m, n, i)| relations_game(m, n, i)).collect();
    let mut c = Checks::default();
    for r in results {
        for failure in r? {
            c.check(false, || failure);
        }
        c.check(true, String::new);
    }
    c.finish(format!("{} random games, float mode, tolerance 1e-7", jobs.len()))
}

/// Probability vectors of length `len` with entries in multiples of `1/k`.
fn grid(len: usize, k: i64) -> Vec<Vec<Rational>> {
    fn go(len: usize, left: i64, k: i64, prefix: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if len == 1 {
            prefix.push(q(left, k));
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 0..=left {
            prefix.push(q(x, k));
            go(len - 1, left - x, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, k, k, &mut Vec::new(), &mut out);
    out
}

fn grid_oracle() -> Outcome {
    let grid3 = grid(3, 6);
    let results: Vec<Result<(f64, usize), String>> = (0..24u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6121D ^ i);
            let labels: Vec<usize> = (0..3).map(|_| rng.random_range(0..3)).collect();
            let part = SisPartition::new(cells_from_labels(&labels), 3).map_err(|e| e.to_string())?;
            let game = gen_random(3, 3, 1, rng.random()).and_then(|g| g.with_partition(part)).map_err(|e| e.to_string())?;
            let selo = solve_selo::<Rational>(&game, &SeloOptions::default()).map_err(|e| e.to_string())?.value;
            let bound = selo.to_f64() + 1e-7;
            let mut worst = f64::NEG_INFINITY;
            let mut passing = 0;
            for s1 in &grid3 {
                for s2 in &grid3 {
                    let p = MixedProfile::new(s1.clone(), s2.clone()).map_err(|e| e.to_string())?;
                    if verify_mixed(&game, &p).map_err(|e| e.to_string())?.passed {
                        passing += 1;
                        let u = expected_utilities(&game, &p).map_err(|e| e.to_string())?.0.to_f64();
                        worst = worst.max(u - bound);
                    }
                }
            }
            Ok((worst, passing))
        })
        .collect();
    let mut c = Checks::default();
    let mut profiles = 0;
    for (i, r) in results.into_iter().enumerate() {
        let (excess, passing) = r?;
        profiles += passing;
        c.check(excess <= 0.0, || format!("game {i}: grid profile beats SELO by {}", excess + 1e-7));
    }
    c.finish(format!("24 games, {profiles} passing grid profiles, none above SELO"))
}

fn experiment_reproduction() -> Outcome {
    let config = ExperimentConfig {
        sizes: vec![(4, 4)],
        games_per_point: 300,
        sis_counts: Some(vec![1, 2, 4]),
        seed: 42,
        mode: Mode::Float,
        parallel: true,
    };
    let points = per_game_values(&config).map_err(|e| format!("{e:#}"))?;
    let values: BTreeMap<usize, &Vec<f64>> = points.iter().map(|p| (p.sis_count, &p.values)).collect();
    let (k1, k2, k4) = (values[&1], values[&2], values[&4]);
    let mut c = Checks::default();
    for i in 0..k1.len() {
        c.check(k1[i] <= k2[i] + 1e-9 && k2[i] <= k4[i] + 1e-9, || {
            format!("game {i}: {} / {} / {} not monotone", k1[i], k2[i], k4[i])
        });
    }

    let rows = |parallel| {
        seslo_cli::experiment::run_experiment(&ExperimentConfig { parallel, ..config.clone() }).map_err(|e| format!("{e:#}"))
    };
    let first = render_csv(&rows(true)?);
    c.check(first == render_csv(&rows(true)?), || "CSV differs between reruns".into());
    c.check(first == render_csv(&rows(false)?), || "CSV differs between serial and parallel runs".into());

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m1, m2, m4) = (mean(k1), mean(k2), mean(k4));
    let share = if m4 > m1 { (m2 - m1) / (m4 - m1) } else { 1.0 };
    let advisory = if share >= 0.5 { "holds" } else { "does not hold" };
    c.finish(format!(
        "300 games, means {m1:.4} / {m2:.4} / {m4:.4}; advisory share of k=1..4 gain reached at k=2: {:.1}% ({advisory})",
        share * 100.0
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("exact example values", exact_values),
        ("deviation analysis", deviation_checks),
        ("X3C reduction equivalence", x3c_reduction),
        ("commitment-power jumps", commitment_jumps),
        ("solver relations", solver_relations),
        ("grid oracle", grid_oracle),
        ("experiment reproduction", experiment_reproduction),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
