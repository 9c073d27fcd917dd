use std::fmt::{self, Write as _};
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use seslo::generators::{Example, GameFamilyParams, X3cInstance};
use seslo::num::{parse_decimal, parse_fraction};
use seslo::io::{correlated_value, game_to_json, matrix_value, mixed_value, parse_game, parse_profile, scalar_value, ProfileFile};
use seslo::{
    correlated_utilities, embed_mixed_as_correlated, expected_utilities, find_deviation,
    solve_best_nash, solve_max_ce, solve_selo, solve_seslo, solve_stackelberg, verify_correlated, verify_mixed,
    CorrelatedProfile, Field, Game, Mode, Rational, SeloOptions, SignalModel, SisPartition, SolveReport, VerifyReport,
    Witness,
};
use seslo_cli::experiment::{run_experiment, ExperimentConfig};
use seslo_cli::output::{emit_outputs, OutputFormat};

#[derive(Parser)]
#[command(name = "seslo", version, about = "Equilibria for a row player with partial commitment power")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optimal value of a solution concept.
    Solve(SolveArgs),
    /// Check a profile for undetectable beneficial deviations.
    Verify(VerifyArgs),
    /// Find the best undetectable deviation of the row player.
    Deviate(DeviateArgs),
    /// Write a generated game to a file.
    Gen(GenArgs),
    /// Average SESLO value of random games by number of SISes.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConceptArg {
    Seslo,
    Selo,
    Stackelberg,
    Nash,
    Ce,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    PublicReveal,
    NoReveal,
    RowKnows,
}

impl From<ModelArg> for SignalModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::PublicReveal => SignalModel::PublicReveal,
            ModelArg::NoReveal => SignalModel::NoReveal,
            ModelArg::RowKnows => SignalModel::RowKnowsColumnSignal,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    concept: ConceptArg,
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Run the exponential searches on games over the size limit.
    #[arg(long)]
    allow_large: bool,
    /// Also write the witness profile to this file.
    #[arg(long)]
    save_witness: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    /// Use the correlated test; mixed profiles are embedded first.
    #[arg(long)]
    correlated: bool,
}

#[derive(Args)]
struct DeviateArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    #[arg(long, value_enum)]
    model: ModelArg,
}

#[derive(Args)]
struct GenArgs {
    /// An example name (EXAMPLE_2x4, SHAPLEY, SIGNALING_5x4, WEAKSIG_6x4),
    /// x3c, close-to-full, close-to-none or random.
    #[arg(long)]
    family: String,
    /// Size parameter of the close-to-* families, or columns for random.
    #[arg(long)]
    n: Option<usize>,
    /// Epsilon of the close-to-* families, as p/q or a decimal.
    #[arg(long)]
    eps: Option<String>,
    /// Rows of a random game.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    sis_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground set size of an X3C instance.
    #[arg(long)]
    elements: Option<usize>,
    /// X3C subsets, e.g. "0,1,2;3,4,5".
    #[arg(long)]
    subsets: Option<String>,
    /// Replacement partition, e.g. "0,1;2,3".
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Rows; together with --n replaces the default sizes.
    #[arg(long, requires = "n")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    games: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated SIS counts; defaults to 1..=m.
    #[arg(long, value_delimiter = ',')]
    sis_counts: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    /// Evaluate games on one thread.
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Deviate(a) => deviate(a),
        Command::Gen(a) => gen(a),
        Command::Experiment(a) => experiment(a),
    }
}

fn read_game(path: &Path) -> Result<Game> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_game(&text).with_context(|| format!("parsing game {}", path.display()))
}

fn read_profile(path: &Path) -> Result<ProfileFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_profile(&text).with_context(|| format!("parsing profile {}", path.display()))
}

/// Stdout text of one command, written in a single call so that a closed
/// pipe ends the program quietly instead of mid-report.
#[derive(Default)]
struct Report(String);

impl Report {
    fn line(&mut self, text: impl fmt::Display) {
        let _ = writeln!(self.0, "{text}");
    }

    fn json(&mut self, value: &Value) {
        self.line(serde_json::to_string_pretty(value).expect("JSON values serialize"));
    }

    fn emit(self) -> Result<()> {
        match io::stdout().lock().write_all(self.0.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).context("writing to stdout"),
            _ => Ok(()),
        }
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let game = read_game(&args.game)?;
    match Mode::from(args.mode) {
        Mode::Exact => report_solve(&game, solve_with::<Rational>(&game, &args)?, &args),
        Mode::Float => report_solve(&game, solve_with::<f64>(&game, &args)?, &args),
    }
}

fn solve_with<F: Field>(game: &Game, args: &SolveArgs) -> Result<SolveReport<F>> {
    let report = match args.concept {
        ConceptArg::Seslo => solve_seslo(game)?,
        ConceptArg::Selo => {
            solve_selo(game, &SeloOptions { allow_large: args.allow_large, ..SeloOptions::default() })?
        }
        ConceptArg::Stackelberg => solve_stackelberg(game)?,
        ConceptArg::Nash => solve_best_nash(game, args.allow_large)?,
        ConceptArg::Ce => solve_max_ce(game)?,
    };
    Ok(report)
}

fn witness_value<F: Field>(witness: &Witness<F>) -> Value {
    match witness {
        Witness::Mixed(p) => mixed_value(p),
        Witness::Correlated(p) => correlated_value(p),
    }
}

fn report_solve<F: Field>(game: &Game, report: SolveReport<F>, args: &SolveArgs) -> Result<()> {
    let witness = witness_value(&report.witness);
    if let Some(path) = &args.save_witness {
        let text = serde_json::to_string_pretty(&witness)?;
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let mode = F::MODE;
    let mut out = Report::default();
    out.line(format_args!("concept:   {}", report.concept));
    out.line(format_args!("mode:      {}", mode_name(mode)));
    out.line(format_args!("value:     {}", report.value_scalar()));
    out.line(format_args!("verified:  {}", if report.verifier_passed { "yes" } else { "NO" }));
    print_witness(&mut out, game, &report.witness);
    let s = report.stats;
    out.json(&json!({
        "concept": report.concept.name(),
        "mode": mode_name(mode),
        "value": scalar_value(&report.value),
        "verifier_passed": report.verifier_passed,
        "witness": witness,
        "stats": {
            "supports_examined": s.supports_examined,
            "vertices_examined": s.vertices_examined,
            "lps_solved": s.lps_solved,
            "stopped_early": s.stopped_early,
        },
    }));
    out.emit()
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

fn print_witness<F: Field>(out: &mut Report, game: &Game, witness: &Witness<F>) {
    match witness {
        Witness::Mixed(p) => {
            let fmt = |v: &[F], name: &dyn Fn(usize) -> String| {
                v.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| format!("{}={}", name(i), x.to_scalar()))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            out.line(format_args!("sigma1:    {}", fmt(p.sigma1(), &|r| game.row_name(r))));
            out.line(format_args!("sigma2:    {}", fmt(p.sigma2(), &|c| game.col_name(c))));
        }
        Witness::Correlated(p) => {
            out.line(format_args!("support:"));
            for r in 0..p.num_rows() {
                for c in 0..p.num_cols() {
                    let x = p.get(r, c);
                    if !x.is_zero() {
                        out.line(format_args!("  ({}, {}) {}", game.row_name(r), game.col_name(c), x.to_scalar()));
                    }
                }
            }
        }
    }
}

fn verify(args: VerifyArgs) -> Result<()> {
    let game = read_game(&args.game)?;
    let profile = read_profile(&args.profile)?;
    let (kind, report, (u1, u2)) = match (profile, args.correlated) {
        (ProfileFile::Mixed(p), false) => ("mixed", verify_mixed(&game, &p)?, expected_utilities(&game, &p)?),
        (ProfileFile::Mixed(p), true) => {
            let joint = embed_mixed_as_correlated(&p);
            ("correlated", verify_correlated(&game, &joint)?, correlated_utilities(&game, &joint)?)
        }
        (ProfileFile::Correlated(p), _) => {
            ("correlated", verify_correlated(&game, &p)?, correlated_utilities(&game, &p)?)
        }
    };
    let mut out = Report::default();
    print_verify(&mut out, &game, kind, &report, &u1, &u2);
    out.emit()
}

fn print_verify(out: &mut Report, game: &Game, kind: &str, report: &VerifyReport<Rational>, u1: &Rational, u2: &Rational) {
    out.line(format_args!("test:        {kind}"));
    out.line(format_args!("passed:      {}", if report.passed { "yes" } else { "no" }));
    out.line(format_args!("row value:   {}", u1.to_scalar()));
    out.line(format_args!("col value:   {}", u2.to_scalar()));
    out.line(format_args!("column gain: {}", report.max_column_gain.to_scalar()));
    if let Some((c, d)) = report.column_witness {
        out.line(format_args!("  {} -> {}", game.col_name(c), game.col_name(d)));
    }
    out.line(format_args!("row gain:    {}", report.max_row_gain.to_scalar()));
    if let Some((r, s)) = report.row_witness {
        out.line(format_args!("  {} -> {}", game.row_name(r), game.row_name(s)));
    }
    out.json(&json!({
        "test": kind,
        "passed": report.passed,
        "row_value": scalar_value(u1),
        "column_value": scalar_value(u2),
        "max_column_gain": scalar_value(&report.max_column_gain),
        "max_row_gain": scalar_value(&report.max_row_gain),
        "column_witness": report.column_witness,
        "row_witness": report.row_witness,
    }));
}

fn deviate(args: DeviateArgs) -> Result<()> {
    let game = read_game(&args.game)?;
    let profile: CorrelatedProfile<Rational> = match read_profile(&args.profile)? {
        ProfileFile::Mixed(p) => embed_mixed_as_correlated(&p),
        ProfileFile::Correlated(p) => p,
    };
    let model = SignalModel::from(args.model);
    let plan = find_deviation(&game, &profile, model)?;
    let (base, _) = correlated_utilities(&game, &profile)?;
    let mut out = Report::default();
    out.line(format_args!("model:      {}", model.name()));
    out.line(format_args!("row value:  {}", base.to_scalar()));
    out.line(format_args!("gain:       {}", plan.gain().to_scalar()));
    out.line(format_args!("deviated:   {}", base.plus(plan.gain()).to_scalar()));
    out.json(&json!({
        "model": model.name(),
        "row_value": scalar_value(&base),
        "gain": scalar_value(plan.gain()),
        "plan": plan.matrices().iter().map(matrix_value).collect::<Vec<_>>(),
    }));
    out.emit()
}

fn parse_index_groups(text: &str, what: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad index `{x}` in {what}")))
                .collect()
        })
        .collect()
}

fn family_params(args: &GenArgs) -> Result<GameFamilyParams> {
    if let Ok(example) = args.family.parse::<Example>() {
        return Ok(GameFamilyParams::Example(example));
    }
    let need_n = || args.n.context("--n is required for this family");
    let eps = || -> Result<Rational> {
        let text = args.eps.as_deref().context("--eps is required for this family")?;
        Ok(if text.contains('/') { parse_fraction(text)? } else { parse_decimal(text)? })
    };
    let key = args.family.to_ascii_lowercase().replace(['-', '_'], "");
    Ok(match key.as_str() {
        "x3c" | "x3creduction" => {
            let elements = args.elements.context("--elements is required for x3c")?;
            let subsets = args.subsets.as_deref().context("--subsets is required for x3c")?;
            let triples = parse_index_groups(subsets, "--subsets")?
                .into_iter()
                .map(|g| <[usize; 3]>::try_from(g).map_err(|g| anyhow::anyhow!("subset {g:?} does not have 3 elements")))
                .collect::<Result<Vec<_>>>()?;
            GameFamilyParams::X3cReduction(X3cInstance::new(elements, triples)?)
        }
        "closetofull" => GameFamilyParams::CloseToFull { n: need_n()?, eps: eps()?, partition: None },
        "closetonone" => GameFamilyParams::CloseToNone { n: need_n()?, eps: eps()?, partition: None },
        "random" => GameFamilyParams::Random {
            m: args.m.context("--m is required for random")?,
            n: need_n()?,
            sis_count: args.sis_count,
            seed: args.seed,
        },
        _ => bail!("unknown family `{}`", args.family),
    })
}

fn gen(args: GenArgs) -> Result<()> {
    let mut game = family_params(&args)?.generate()?;
    if let Some(text) = &args.partition {
        let cells = parse_index_groups(text, "--partition")?;
        game = game.with_partition(SisPartition::new(cells, game.num_rows())?)?;
    }
    fs::write(&args.out, game_to_json(&game) + "\n").with_context(|| format!("writing {}", args.out.display()))?;
    let mut out = Report::default();
    out.line(format_args!("wrote {}x{} game to {}", game.num_rows(), game.num_cols(), args.out.display()));
    out.emit()
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut config = ExperimentConfig {
        games_per_point: args.games,
        sis_counts: args.sis_counts,
        seed: args.seed,
        mode: args.mode.into(),
        parallel: !args.serial,
        ..ExperimentConfig::default()
    };
    if let (Some(m), Some(n)) = (args.m, args.n) {
        config.sizes = vec![(m, n)];
    }
    let rows = run_experiment(&config)?;
    emit_outputs(&rows, OutputFormat::Csv, &args.out_csv)?;
    if let Some(svg) = &args.out_svg {
        emit_outputs(&rows, OutputFormat::Svg, svg)?;
    }
    let mut out = Report::default();
    for r in &rows {
        out.line(format_args!("{}x{} k={} mean={:.6} std={:.6} ({} games)", r.m, r.n, r.sis_count, r.mean, r.std, r.games));
    }
    out.emit()
}
