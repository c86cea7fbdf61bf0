//! Command-line front end: argument parsing, dispatch, and report writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use outerprod::bounds::{PreparedPair, QuadratureCheck};
use outerprod::harness::{fuzz_campaign, fuzz_campaign_with_workers, CounterexampleFixture, ReplayOutcome};
use outerprod::json;
use outerprod::{
    check_admissible, outer_product, rank_one_spectrum, CampaignConfig, CampaignReport, Error, ExtendedReal,
    Hypotheses, InequalitySides, NormKind, QuadratureConfig, SpectrumMode, Statement, Vector,
};
use serde::{Deserialize, Serialize};

pub mod csv_report;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A campaign (or replayed fixture) produced at least one `fails` status.
    pub const FAILS_FOUND: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "outerprod", version, about = "Evaluate the log-spectral outer product and its inequality bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the outer product (a;b).
    Eval(EvalArgs),
    /// Print the spectrum of ab^T.
    Spectrum(SpectrumArgs),
    /// Print which standing hypotheses the pair satisfies. Always exits 0 on valid input.
    Check(CheckArgs),
    /// Print both sides of the selected inequalities.
    Bounds(BoundsArgs),
    /// Run a seeded randomized campaign.
    Fuzz(FuzzArgs),
    /// Re-evaluate a counterexample fixture written by `fuzz`.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Multiset,
    Set,
    Both,
}

impl ModeArg {
    pub fn modes(self) -> Vec<SpectrumMode> {
        match self {
            ModeArg::Multiset => vec![SpectrumMode::Multiset],
            ModeArg::Set => vec![SpectrumMode::Set],
            ModeArg::Both => SpectrumMode::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatementArg {
    PropKey,
    Theorem1,
    Theorem2,
    All,
}

impl StatementArg {
    pub fn statements(self) -> Vec<Statement> {
        match self {
            StatementArg::PropKey => vec![Statement::PropKey],
            StatementArg::Theorem1 => vec![Statement::Theorem1],
            StatementArg::Theorem2 => vec![Statement::Theorem2],
            StatementArg::All => Statement::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// First vector as a JSON array, e.g. "[1.5,0]".
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Second vector as a JSON array.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
}

impl PairArgs {
    fn parse(&self) -> Result<(Vector, Vector), Error> {
        let a = Vector::from_json(&self.a).map_err(|e| Error::Input(format!("--a: {e}")))?;
        let b = Vector::from_json(&self.b).map_err(|e| Error::Input(format!("--b: {e}")))?;
        if a.dim() != b.dim() {
            return Err(Error::Input(format!("--a has dimension {} but --b has dimension {}", a.dim(), b.dim())));
        }
        Ok((a, b))
    }
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 50)]
    pub max_depth: u32,
}

impl QuadratureArgs {
    fn config(&self) -> Result<QuadratureConfig, Error> {
        let cfg = QuadratureConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_depth: self.max_depth,
            ..QuadratureConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormKind,
    #[arg(long, value_enum, default_value_t = ModeArg::Multiset)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Multiset)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormKind,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormKind,
    #[arg(long, value_enum, default_value_t = ModeArg::Multiset)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = StatementArg::All)]
    pub statement: StatementArg,
    /// Accept ||a|| <= 1; results are labeled outside_hypotheses.
    #[arg(long)]
    pub relax_norm_floor: bool,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dim_min: usize,
    #[arg(long, default_value_t = 6)]
    pub dim_max: usize,
    #[arg(long, default_value = "l2", value_parser = parse_norm)]
    pub norm: NormKind,
    #[arg(long, default_value_t = 5.0)]
    pub coord_scale: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 100)]
    pub check_quadrature_every: u64,
    #[arg(long)]
    pub relax_norm_floor: bool,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    /// Worker threads; defaults to all cores. Does not affect the report.
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-trial CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Directory for standalone counterexample fixtures
    /// (default: `<out>.counterexamples` when --out is given).
    #[arg(long)]
    pub counterexamples: Option<PathBuf>,
    /// At most this many fixture files are written (lowest trial indices first);
    /// the JSON report always carries every counterexample.
    #[arg(long, default_value_t = 1000)]
    pub max_fixtures: usize,
}

impl FuzzArgs {
    pub fn config(&self) -> Result<CampaignConfig, Error> {
        let cfg = CampaignConfig {
            trials: self.trials,
            seed: self.seed,
            dim_min: self.dim_min,
            dim_max: self.dim_max,
            norm_kind: self.norm,
            coord_scale: self.coord_scale,
            modes: self.mode.modes(),
            quadrature: self.quadrature.config()?,
            check_quadrature_every: self.check_quadrature_every,
            hypotheses: Hypotheses { relax_norm_floor: self.relax_norm_floor },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Fixture file written by `fuzz`.
    #[arg(long)]
    pub fixture: PathBuf,
}

/// One entry of `bounds` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSides {
    pub statement: Statement,
    pub sides: InequalitySides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsOutput {
    pub results: Vec<LabeledSides>,
    /// Present when theorem2 was requested.
    pub quadrature_check: Option<QuadratureCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub trial_index: u64,
    pub seed_reproduces: bool,
    pub statuses_reproduce: bool,
    pub still_fails: bool,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(Error::Quadrature { .. }) => exit::NUMERICAL,
            _ => exit::INPUT,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(e) => e.clone(),
        }
    }
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Eval(args) => run_eval(args, out),
        Command::Spectrum(args) => run_spectrum(args, out),
        Command::Check(args) => run_check(args, out),
        Command::Bounds(args) => run_bounds(args, out),
        Command::Fuzz(args) => run_fuzz(args, out, err),
        Command::Replay(args) => run_replay(args, out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (a, b) = args.pair.parse()?;
    match args.mode {
        ModeArg::Both => {
            let values: std::collections::BTreeMap<SpectrumMode, f64> = SpectrumMode::ALL
                .into_iter()
                .map(|m| outer_product(&a, &b, args.norm, m).map(|v| (m, v)))
                .collect::<Result<_, _>>()?;
            print_json(out, &values)?;
        }
        _ => {
            let value = outer_product(&a, &b, args.norm, args.mode.modes()[0])?;
            writeln!(out, "{}", json::format_f64(value))?;
        }
    }
    Ok(exit::OK)
}

fn run_spectrum(args: &SpectrumArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (a, b) = args.pair.parse()?;
    let spectra = args.mode.modes().into_iter().map(|m| rank_one_spectrum(&a, &b, m)).collect::<Result<Vec<_>, _>>()?;
    if spectra.len() == 1 {
        print_json(out, &spectra[0])?;
    } else {
        print_json(out, &spectra)?;
    }
    Ok(exit::OK)
}

fn run_check(args: &CheckArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (a, b) = args.pair.parse()?;
    print_json(out, &check_admissible(&a, &b, args.norm)?)?;
    Ok(exit::OK)
}

fn run_bounds(args: &BoundsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (a, b) = args.pair.parse()?;
    let quadrature = args.quadrature.config()?;
    let hypotheses = Hypotheses { relax_norm_floor: args.relax_norm_floor };
    let pair = PreparedPair::new(&a, &b, args.norm, &hypotheses)?;
    let statements = args.statement.statements();

    let mut results = Vec::new();
    for &statement in &statements {
        for mode in args.mode.modes() {
            results.push(LabeledSides { statement, sides: pair.sides(statement, mode)? });
        }
    }
    let quadrature_check = if statements.contains(&Statement::Theorem2) {
        Some(pair.quadrature_check(&quadrature)?)
    } else {
        None
    };
    print_json(out, &BoundsOutput { results, quadrature_check })?;
    match quadrature_check {
        Some(check) if !check.agrees => Err(Failure::Core(Error::Quadrature {
            estimate: check.quadrature,
            error_bound: check.abs_error,
        })),
        _ => Ok(exit::OK),
    }
}

fn run_fuzz(args: &FuzzArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = args.config()?;
    let report = match args.workers {
        Some(w) => fuzz_campaign_with_workers(&cfg, w)?,
        None => fuzz_campaign(&cfg)?,
    };

    match &args.out {
        Some(path) => write_file(path, &json::to_string_compact(&report)?)?,
        None => print_json(out, &report)?,
    }
    if let Some(path) = &args.csv {
        let mut buf = Vec::new();
        csv_report::write_rows(&mut buf, &report)?;
        fs::write(path, buf)?;
    }
    let fixture_dir = args
        .counterexamples
        .clone()
        .or_else(|| args.out.as_ref().map(|p| PathBuf::from(format!("{}.counterexamples", p.display()))));
    if let Some(dir) = fixture_dir.filter(|_| !report.counterexamples.is_empty()) {
        let written = write_fixtures(&dir, &report, args.max_fixtures)?;
        if written < report.counterexamples.len() {
            writeln!(
                err,
                "wrote {written} of {} counterexample fixtures to {}",
                report.counterexamples.len(),
                dir.display()
            )?;
        }
    }
    write_summary(err, &report)?;

    Ok(if report.fails() > 0 { exit::FAILS_FOUND } else { exit::OK })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_fixtures(dir: &Path, report: &CampaignReport, limit: usize) -> Result<usize, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let records = &report.counterexamples[..report.counterexamples.len().min(limit)];
    for record in records {
        let fixture = CounterexampleFixture { config: report.config.clone(), record: record.clone() };
        let path = dir.join(format!("trial-{:06}.json", record.trial_index));
        write_file(&path, &json::to_string_pretty(&fixture)?)?;
    }
    Ok(records.len())
}

fn write_summary(err: &mut dyn Write, report: &CampaignReport) -> Result<(), Failure> {
    writeln!(
        err,
        "{} trials in {:.2?}; rejection rate {:.4}; quadrature checks {} (failures {}, disagreements {})",
        report.config.trials,
        report.elapsed,
        report.rejection_rate,
        report.quadrature.checked,
        report.quadrature.failures,
        report.quadrature.disagreements,
    )?;
    for (st, per_mode) in &report.totals {
        for (mode, t) in per_mode {
            let median = report.margins[st][mode].map(|m| m.p50).unwrap_or(f64::NAN);
            writeln!(
                err,
                "  {:<9} {:<8} holds {:>6}  fails {:>6}  degenerate {:>6}  rhs_undefined {:>3}  median margin {}",
                st.as_str(),
                mode.to_string(),
                t.holds,
                t.fails,
                t.degenerate_lhs_neg_inf,
                t.rhs_undefined,
                ExtendedReal::Finite(median),
            )?;
        }
    }
    Ok(())
}

fn run_replay(args: &ReplayArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = fs::read_to_string(&args.fixture).map_err(|e| Failure::Io(format!("{}: {e}", args.fixture.display())))?;
    let fixture: CounterexampleFixture =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("--fixture: {e}")))?;
    fixture.config.validate()?;
    let ReplayOutcome { seed_reproduces, statuses_reproduce, still_fails } = fixture.replay()?;
    print_json(
        out,
        &ReplayReport { trial_index: fixture.record.trial_index, seed_reproduces, statuses_reproduce, still_fails },
    )?;
    Ok(if still_fails { exit::FAILS_FOUND } else { exit::OK })
}
