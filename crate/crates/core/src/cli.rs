//! Command-line front end: `mine`, `gen` and `check`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
//! violation (strategies disagreeing, oracle mismatch).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::format;
use crate::miner::{mine_with, resolve_threshold, MiningConfig, Pattern, Threshold};
use crate::model::{LSequence, UtilityTable};
use crate::oracle::{self, GeneratorParams};
use crate::par::{self, Execution};
use crate::report::{ConfigEcho, DatasetStats, RunReport, StrategyRun};
use crate::transform::transform_dataset;
use crate::utility::{self, UpperBoundKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "huipm",
    version,
    about = "High-utility pattern mining over interval-based event sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine high-utility patterns from a dataset file.
    Mine(MineArgs),
    /// Emit a seeded random dataset.
    Gen(GenArgs),
    /// Compare the miner with the brute-force oracle on a bundled corpus.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum XiMode {
    Absolute,
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct MineArgs {
    /// Dataset file (`id label begin finish` per line).
    #[arg(long)]
    data: PathBuf,
    /// External utility file (`label value` per line).
    #[arg(long)]
    utilities: Option<PathBuf>,
    /// Utility for labels missing from the utility file.
    #[arg(long)]
    default_utility: Option<f64>,
    /// Minimum utility threshold.
    #[arg(long)]
    xi: f64,
    #[arg(long, value_enum, default_value = "absolute")]
    xi_mode: XiMode,
    /// Maximum pattern length.
    #[arg(short = 'K', default_value_t = 4)]
    max_length: usize,
    /// Maximum coincidence size.
    #[arg(short = 'Z', default_value_t = 5)]
    max_size: usize,
    /// Comma-separated list of none, ldc, pdc.
    #[arg(long, default_value = "pdc", value_delimiter = ',')]
    strategy: Vec<String>,
    /// Report wall-clock time per strategy.
    #[arg(long)]
    benchmark: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Worker threads (0 or absent: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    sequences: usize,
    #[arg(long, default_value_t = 6)]
    max_intervals: usize,
    #[arg(long, default_value_t = 4)]
    alphabet: usize,
    #[arg(long, default_value_t = 20)]
    max_time: u64,
    #[arg(long, default_value_t = 8)]
    max_duration: u64,
    #[arg(long, default_value_t = 5)]
    max_utility: u32,
    /// Dataset destination (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Utility file destination.
    #[arg(long)]
    utilities_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Number of seeded random instances besides the running example.
    #[arg(long, default_value_t = 100)]
    instances: u64,
    #[arg(long)]
    threads: Option<usize>,
}

/// Outcome of a subcommand that is not a plain success.
enum Failure {
    Usage(String),
    Data(Error),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(m) => Failure::Usage(m),
            other => Failure::Data(other),
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let info = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if info {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Mine(a) => run_mine(a, out),
        Command::Gen(a) => run_gen(a, out),
        Command::Check(a) => run_check(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
        Err(Failure::Invariant(m)) => {
            let _ = writeln!(err, "invariant violation: {m}");
            EXIT_INVARIANT
        }
    }
}

fn emit(
    out: &mut dyn Write,
    path: Option<&PathBuf>,
    text: &str,
) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Data(Error::Io(format!("{}: {e}", p.display())))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Data(e.into())),
    }
}

fn run_mine(a: MineArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let mut strategies = Vec::new();
    for s in &a.strategy {
        let s: UpperBoundKind = s.parse()?;
        if !strategies.contains(&s) {
            strategies.push(s);
        }
    }
    if strategies.is_empty() {
        return Err(Failure::Usage("no strategy given".into()));
    }
    if let Some(v) = a.default_utility {
        if !v.is_finite() || v < 0.0 {
            return Err(Failure::Usage(format!(
                "--default-utility must be nonnegative, got {v}"
            )));
        }
    }
    let threshold = match a.xi_mode {
        XiMode::Absolute => Threshold::Absolute(a.xi),
        XiMode::Relative => Threshold::Relative(a.xi),
    };
    let configs: Vec<MiningConfig> = strategies
        .iter()
        .map(|&s| MiningConfig::new(threshold, a.max_length, a.max_size, s))
        .collect();
    configs[0].validate()?;

    let raw = format::read_dataset(&a.data)?;
    let table = match &a.utilities {
        Some(p) => format::read_utilities(p)?,
        None => UtilityTable::new(),
    };
    let data = transform_dataset(&raw, &table, a.default_utility)?;
    let exec = if a.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };

    let results = par::with_threads(a.threads, || {
        configs
            .iter()
            .map(|c| mine_with(&data, c, exec))
            .collect::<Result<Vec<_>>>()
    })?;

    let reference = &results[0].0;
    let agree = results.iter().all(|(p, _)| p == reference);
    let report = RunReport {
        config: ConfigEcho {
            threshold,
            xi_abs: resolve_threshold(&configs[0], &data),
            max_length: a.max_length,
            max_size: a.max_size,
            strategies: strategies.clone(),
            benchmark: a.benchmark,
        },
        dataset: DatasetStats::new(&raw, &data),
        runs: strategies
            .iter()
            .zip(&results)
            .map(|(&s, (_, st))| StrategyRun::new(s, st, a.benchmark))
            .collect(),
        strategies_agree: agree,
        patterns: reference.clone(),
    };
    let text = match a.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Table => report.to_table(),
    };
    emit(out, a.output.as_ref(), &text)?;
    if !agree {
        return Err(Failure::Invariant(
            "strategies returned different pattern sets".into(),
        ));
    }
    Ok(())
}

fn run_gen(a: GenArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let params = GeneratorParams {
        seed: a.seed,
        num_sequences: a.sequences,
        max_intervals_per_seq: a.max_intervals,
        alphabet_size: a.alphabet,
        max_time: a.max_time,
        max_duration: a.max_duration,
        max_external_utility: a.max_utility,
    };
    let (d, t) = oracle::random_dataset(&params)?;
    let mut buf = Vec::new();
    format::write_dataset(&d, &mut buf).map_err(|e| Failure::Data(e.into()))?;
    emit(out, a.output.as_ref(), &String::from_utf8_lossy(&buf))?;
    if let Some(p) = &a.utilities_out {
        let mut buf = Vec::new();
        format::write_utilities(&t, &mut buf).map_err(|e| Failure::Data(e.into()))?;
        emit(out, Some(p), &String::from_utf8_lossy(&buf))?;
    }
    Ok(())
}

fn check_line(out: &mut dyn Write, ok: bool, name: &str) -> bool {
    let _ = writeln!(out, "{} {name}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn run_check(a: CheckArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let mut all = true;

    let d = fixtures::running_example_cdataset();
    let ab = LSequence::from_labels(&[&["A"], &["B"]]).expect("literal pattern");
    let golden = [
        (
            "running example: u_d = 134",
            utility::dataset_utility(&d) == 134.0,
        ),
        (
            "running example: u_max(<{A}{B}>) = 22",
            utility::max_utility(&ab, &d) == 22.0,
        ),
        (
            "running example: LWU_3(<{A}{B}>) = 50",
            utility::lwu(&ab, 3, &d) == 50.0,
        ),
        (
            "running example: P_3(<{A}{B}>) = 42",
            utility::projected_utilization(&ab, 3, &d) == Ok(42.0),
        ),
    ];
    for (name, ok) in golden {
        all &= check_line(out, ok, name);
    }

    let mismatches = par::with_threads(a.threads, || -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for seed in 0..a.instances {
            let inst = oracle::small_instance(seed);
            let expected: Vec<Pattern> = oracle::brute_force_mine(
                &inst.data,
                &inst.config(UpperBoundKind::None),
                oracle::DEFAULT_BUDGET,
            )?;
            for s in UpperBoundKind::ALL {
                let (got, _) = mine_with(&inst.data, &inst.config(s), Execution::Parallel)?;
                if got != expected {
                    bad.push(format!("seed {seed} strategy {s}"));
                }
            }
        }
        Ok(bad)
    })?;
    for m in &mismatches {
        let _ = writeln!(out, "  mismatch: {m}");
    }
    all &= check_line(
        out,
        mismatches.is_empty(),
        &format!("oracle equivalence on {} random instances", a.instances),
    );

    if all {
        Ok(())
    } else {
        Err(Failure::Invariant("self-check failed".into()))
    }
}
