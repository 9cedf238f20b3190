//! Command-line front end.
//!
//! Parameters come from flags, optionally layered over a JSON file given with
//! `--config` (flags win). Exit codes: 0 success, 1 usage or I/O error,
//! 2 numerical failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::coupling::build_t;
use crate::error::Error as CoreError;
use crate::geometry::{FeedStyle, ScenarioSpec, TiltModel};
use crate::modes::{svd_modes, BeamLabel};
use crate::patterns::{self, AngleGrid, Cophase, DEFAULT_STEP_DEG};
use crate::report::ModeReport;
use crate::sweep::{self, FRange, Family, Grid, Objective};

#[derive(Debug, Error)]
pub enum CliError {
    /// --help / --version output; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Numerical(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e)
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "amaf-ris", version, about = "Near-field AMAF to RIS power transfer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// JSON mode report for one scenario
    Analyze(Flags),
    /// Mode metrics over an N_p × f grid (CSV)
    Table(Flags),
    /// Feeder or RIS radiation pattern (CSV)
    Pattern(Flags),
    /// RIS excitation magnitude profile (CSV)
    Profile(Flags),
    /// Exhaustive scan over f (CSV trace)
    #[command(name = "sweep-f")]
    SweepF(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feed {
    Center,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Beam {
    Pem,
    Nonpem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiltArg {
    PositionsOnly,
    Rigid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternTarget {
    Amaf,
    Ris,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CophaseArg {
    Broadside,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ObjectiveArg {
    MaxPower,
    MinSll,
    MinProfileVariation,
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// JSON file with default parameter values
    #[arg(long)]
    config: Option<PathBuf>,
    /// AMAF element count
    #[arg(long)]
    na: Option<usize>,
    /// RIS element count(s), comma separated
    #[arg(long, value_delimiter = ',')]
    np: Option<Vec<usize>>,
    /// AMAF–RIS distance(s) in half wavelengths, comma separated
    #[arg(long, value_delimiter = ',')]
    f: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    feed: Option<Feed>,
    /// Turn an end feeder toward the RIS centre
    #[arg(long)]
    tilted: bool,
    #[arg(long, value_enum)]
    tilt_model: Option<TiltArg>,
    #[arg(long, value_enum)]
    beam: Option<Beam>,
    /// Pattern angle step, degrees
    #[arg(long)]
    grid_step: Option<f64>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Pattern of the feeder or of the co-phased RIS
    #[arg(long, value_enum)]
    target: Option<PatternTarget>,
    #[arg(long, value_enum)]
    cophase: Option<CophaseArg>,
    #[arg(long)]
    f_min: Option<f64>,
    #[arg(long)]
    f_max: Option<f64>,
    #[arg(long)]
    f_step: Option<f64>,
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> From<OneOrMany<T>> for Vec<T> {
    fn from(v: OneOrMany<T>) -> Vec<T> {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(xs) => xs,
        }
    }
}

/// Schema of the `--config` file. Every key is optional; unknown keys are
/// rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    na: Option<usize>,
    np: Option<OneOrMany<usize>>,
    f: Option<OneOrMany<f64>>,
    feed: Option<Feed>,
    tilted: Option<bool>,
    tilt_model: Option<TiltArg>,
    beam: Option<Beam>,
    grid_step: Option<f64>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    target: Option<PatternTarget>,
    cophase: Option<CophaseArg>,
    f_min: Option<f64>,
    f_max: Option<f64>,
    f_step: Option<f64>,
    objective: Option<ObjectiveArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Analyze,
    Table,
    Pattern,
    Profile,
    SweepF,
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n_a: usize,
    pub n_p: Vec<usize>,
    pub f: Vec<f64>,
    pub feed: FeedStyle,
    pub tilted: bool,
    pub tilt_model: TiltModel,
    pub beam: BeamLabel,
    pub grid: AngleGrid,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub target: PatternTarget,
    pub cophase: Cophase,
    pub f_range: Option<FRange>,
    pub objective: Objective,
}

impl RunConfig {
    /// The single scenario of analyze / pattern / profile.
    pub fn scenario(&self) -> ScenarioSpec {
        ScenarioSpec {
            n_a: self.n_a,
            n_p: self.n_p[0],
            f: self.f[0],
            feed: self.feed,
            tilted: self.tilted,
            tilt_model: self.tilt_model,
        }
    }
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("--config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("--config {}: {e}", path.display())))
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;
    let (command, flags) = match cli.command {
        Command::Analyze(f) => (CommandKind::Analyze, f),
        Command::Table(f) => (CommandKind::Table, f),
        Command::Pattern(f) => (CommandKind::Pattern, f),
        Command::Profile(f) => (CommandKind::Profile, f),
        Command::SweepF(f) => (CommandKind::SweepF, f),
    };
    let file = match &flags.config {
        Some(p) => read_config(p)?,
        None => FileConfig::default(),
    };
    validate(command, flags, file)
}

fn validate(command: CommandKind, flags: Flags, file: FileConfig) -> Result<RunConfig, CliError> {
    let n_a = flags.na.or(file.na).unwrap_or(4);
    if n_a == 0 {
        return Err(usage("--na must be at least 1"));
    }
    let n_p: Vec<usize> = flags.np.or(file.np.map(Into::into)).unwrap_or_default();
    let f: Vec<f64> = flags.f.or(file.f.map(Into::into)).unwrap_or_default();
    if n_p.is_empty() {
        return Err(usage("missing required parameter --np"));
    }
    if let Some(bad) = n_p.iter().find(|&&n| n == 0) {
        return Err(usage(format!("--np must be at least 1, got {bad}")));
    }
    if let Some(bad) = f.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(usage(format!("--f must be positive, got {bad}")));
    }

    let feed = match flags.feed.or(file.feed).unwrap_or(Feed::Center) {
        Feed::Center => FeedStyle::Center,
        Feed::End => FeedStyle::End,
    };
    let tilted = flags.tilted || file.tilted.unwrap_or(false);
    if tilted && feed == FeedStyle::Center {
        return Err(usage("--tilted applies only to --feed end"));
    }
    let tilt_model = match flags.tilt_model.or(file.tilt_model).unwrap_or(TiltArg::PositionsOnly) {
        TiltArg::PositionsOnly => TiltModel::PositionsOnly,
        TiltArg::Rigid => TiltModel::Rigid,
    };
    let beam = match flags.beam.or(file.beam).unwrap_or(Beam::Pem) {
        Beam::Pem => BeamLabel::Pem,
        Beam::Nonpem => BeamLabel::Nonpem,
    };
    let step = flags.grid_step.or(file.grid_step).unwrap_or(DEFAULT_STEP_DEG);
    let grid = AngleGrid::full(step).map_err(|e| usage(format!("--grid-step: {e}")))?;

    let default_format = if command == CommandKind::Analyze { OutputFormat::Json } else { OutputFormat::Csv };
    let format = flags.format.or(file.format).unwrap_or(default_format);
    if command == CommandKind::Analyze && format == OutputFormat::Csv {
        return Err(usage("analyze writes JSON only; drop --format csv"));
    }
    let target = flags.target.or(file.target).unwrap_or(PatternTarget::Amaf);
    let cophase = match flags.cophase.or(file.cophase).unwrap_or(CophaseArg::Broadside) {
        CophaseArg::Broadside => Cophase::Broadside,
        CophaseArg::None => Cophase::None,
    };
    let objective = match flags.objective.or(file.objective).unwrap_or(ObjectiveArg::MinSll) {
        ObjectiveArg::MaxPower => Objective::MaxPower,
        ObjectiveArg::MinSll => Objective::MinSll,
        ObjectiveArg::MinProfileVariation => Objective::MinProfileVariation,
    };

    let single = |what: &str, len: usize| -> Result<(), CliError> {
        if len != 1 {
            return Err(usage(format!("{what} takes exactly one value for this subcommand")));
        }
        Ok(())
    };
    let mut f_range = None;
    match command {
        CommandKind::Analyze | CommandKind::Pattern | CommandKind::Profile => {
            single("--np", n_p.len())?;
            if f.is_empty() {
                return Err(usage("missing required parameter --f"));
            }
            single("--f", f.len())?;
        }
        CommandKind::Table => {
            if f.is_empty() {
                return Err(usage("missing required parameter --f"));
            }
        }
        CommandKind::SweepF => {
            single("--np", n_p.len())?;
            let get = |name: &str, v: Option<f64>| v.ok_or_else(|| usage(format!("missing required parameter {name}")));
            let lo = get("--f-min", flags.f_min.or(file.f_min))?;
            let hi = get("--f-max", flags.f_max.or(file.f_max))?;
            let step = get("--f-step", flags.f_step.or(file.f_step))?;
            f_range = Some(FRange::new(lo, hi, step).map_err(|e| usage(format!("f range: {e}")))?);
        }
    }

    Ok(RunConfig {
        command,
        n_a,
        n_p,
        f,
        feed,
        tilted,
        tilt_model,
        beam,
        grid,
        out: flags.out.or(file.out),
        format,
        target,
        cophase,
        f_range,
        objective,
    })
}

fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s.into_bytes()
}

/// Renders the subcommand's output in memory.
pub fn render(config: &RunConfig) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    let io = |e: std::io::Error| CliError::Io { path: "<buffer>".into(), source: e };
    match config.command {
        CommandKind::Analyze => {
            let mut s = ModeReport::compute(&config.scenario(), config.beam)?.to_json();
            s.push('\n');
            buf = s.into_bytes();
        }
        CommandKind::Table => {
            let mut grid = Grid::new(config.n_a, config.n_p.clone(), config.f.clone(), config.feed);
            grid.tilted = config.tilted;
            grid.tilt_model = config.tilt_model;
            grid.beams = vec![config.beam];
            let records = grid.run()?;
            match config.format {
                OutputFormat::Csv => sweep::write_table_csv(&records, &mut buf).map_err(io)?,
                OutputFormat::Json => buf = json(&records),
            }
        }
        CommandKind::Pattern | CommandKind::Profile => {
            let t = build_t(&config.scenario().build()?)?;
            let modes = svd_modes(&t)?;
            let b = modes.beam(config.beam).expect("cli beams are pem or nonpem");
            if config.command == CommandKind::Profile {
                let profile = patterns::ris_excitation(&t, &b)?;
                match config.format {
                    OutputFormat::Csv => profile.write_csv(&mut buf).map_err(io)?,
                    OutputFormat::Json => buf = json(&profile),
                }
            } else {
                let curve = match config.target {
                    PatternTarget::Amaf => patterns::amaf_pattern(&b, &config.grid)?,
                    PatternTarget::Ris => patterns::ris_pattern(&t, &b, &config.grid, config.cophase)?,
                };
                match config.format {
                    OutputFormat::Csv => curve.write_csv(&mut buf).map_err(io)?,
                    OutputFormat::Json => buf = json(&curve),
                }
            }
        }
        CommandKind::SweepF => {
            let family = Family {
                n_a: config.n_a,
                n_p: config.n_p[0],
                feed: config.feed,
                tilted: config.tilted,
                tilt_model: config.tilt_model,
                beam: config.beam,
                grid: config.grid,
            };
            let opt = sweep::optimize_f(&family, config.f_range.as_ref().expect("validated"), config.objective)?;
            match config.format {
                OutputFormat::Csv => opt.write_csv(&mut buf).map_err(io)?,
                OutputFormat::Json => buf = json(&opt),
            }
        }
    }
    Ok(buf)
}

/// Computes and writes the output; nothing is written if computation fails.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let bytes = render(config)?;
    match &config.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| CliError::Io { path: path.display().to_string(), source: e }),
        None => std::io::stdout().write_all(&bytes).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e }),
    }
}

/// Parse, run and report; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => 0,
        Err(CliError::Info(msg)) => {
            print!("{msg}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
