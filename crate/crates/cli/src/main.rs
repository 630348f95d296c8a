//! `fbl`: bounds, sweeps, simulations and property suites from the command
//! line.
//!
//! Exit codes: 0 success, 1 usage or invalid parameters, 2 infeasible points
//! under `--strict`, 3 I/O failure, 4 failed verification checks.

mod config;
mod grid;
mod report;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use fbl_bounds::bounds::{bler_from_radius, decision_radius, evaluate};
use fbl_bounds::distance::min_hamming_for_radius;
use fbl_bounds::sim::{gen_codebook, run_trials};
use fbl_bounds::verify::{run_suite, Suite};
use fbl_bounds::{Constellation, DistanceUnit, EnergySpec, OperatingPoint, SystemConfig};

use config::ConfigFile;
use report::{
    BoundRow, CodebookInfo, ComputeReport, SimulateReport, SimulateRow, SimulationChecks, VerifyReport,
};

/// Codebooks at most this large get their minimum distance measured.
const MEASURE_DISTANCE_LIMIT: usize = 4096;
/// Offset separating the codebook key from the trial key.
const CODEBOOK_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Infeasible(String),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Io(_) => 3,
            CliError::Failed(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Infeasible(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<fbl_bounds::Error> for CliError {
    fn from(e: fbl_bounds::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<grid::GridError> for CliError {
    fn from(e: grid::GridError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "fbl", version, about = "Confusion and erasure bounds for error-bounded block decoders")]
struct Cli {
    /// Flat key = value file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds at a single operating point.
    Compute(ComputeArgs),
    /// Bounds along one axis, one CSV row per grid point.
    Sweep(SweepArgs),
    /// Monte Carlo run of the bounded decoder next to the analytic bounds.
    Simulate(SimulateArgs),
    /// Property suites on their default grids.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct SystemArgs {
    /// Alphabet size.
    #[arg(long = "M", value_name = "M")]
    m: Option<u32>,
    /// Blocklength.
    #[arg(long)]
    n: Option<u32>,
    /// Payload length.
    #[arg(long)]
    k: Option<u32>,
    /// Block error budget.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Per-dimension noise variance.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Eb/N0 in dB with N0 = 2 sigma2.
    #[arg(long = "ebn0-db", allow_hyphen_values = true, conflicts_with_all = ["energy", "es"])]
    ebn0_db: Option<f64>,
    /// Total codeword energy E.
    #[arg(long, conflicts_with = "es")]
    energy: Option<f64>,
    /// Energy per symbol.
    #[arg(long)]
    es: Option<f64>,
    /// Squared distance per differing symbol.
    #[arg(long = "distance-unit", value_enum)]
    distance_unit: Option<UnitArg>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Exit with status 2 when the point is infeasible.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long, value_enum)]
    axis: Option<Axis>,
    /// `a,b,c`, `start:stop:step` or `start:stop:count:lin|log`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Exit with status 2 when any point is infeasible.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seed for codebook generation; derived from --seed when absent.
    #[arg(long = "codebook-seed")]
    codebook_seed: Option<u64>,
    #[arg(long, value_enum)]
    constellation: Option<ConstellationArg>,
    /// Minimum Hamming distance imposed on the codebook: a number, or
    /// `auto` for the smallest distance keeping decision spheres disjoint.
    #[arg(long = "min-distance")]
    min_distance: Option<MinDistance>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// lemma2, lemma3, lemma4, lemma5, thm1, thm4, thm5, thm6, thm7, cor1 or all.
    suite: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Axis {
    Blocklength,
    #[value(name = "ebn0-db", alias = "ebn0_db")]
    Ebn0Db,
    Energy,
    Radius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum UnitArg {
    TotalEnergy,
    Antipodal,
    Orthogonal,
}

impl From<UnitArg> for DistanceUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::TotalEnergy => DistanceUnit::TotalEnergy,
            UnitArg::Antipodal => DistanceUnit::Antipodal,
            UnitArg::Orthogonal => DistanceUnit::Orthogonal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstellationArg {
    Antipodal,
    Psk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MinDistance {
    Auto,
    At(u32),
}

impl std::str::FromStr for MinDistance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(MinDistance::Auto);
        }
        s.parse::<u32>()
            .map(MinDistance::At)
            .map_err(|_| format!("expected `auto` or a non-negative integer, got `{s}`"))
    }
}

fn resolve_system(args: &SystemArgs, file: &ConfigFile) -> Result<SystemConfig, CliError> {
    let m = file.pick(args.m, "M")?.unwrap_or(2);
    let n = file
        .pick(args.n, "n")?
        .ok_or_else(|| CliError::Usage("blocklength --n is required".into()))?;
    let k = file
        .pick(args.k, "k")?
        .ok_or_else(|| CliError::Usage("payload length --k is required".into()))?;
    let epsilon = file.pick(args.epsilon, "epsilon")?.unwrap_or(0.05);
    let sigma2 = file.pick(args.sigma2, "sigma2")?.unwrap_or(0.5);
    let energy = match (args.ebn0_db, args.energy, args.es) {
        (Some(db), _, _) => EnergySpec::EbN0Db(db),
        (_, Some(e), _) => EnergySpec::Total(e),
        (_, _, Some(es)) => EnergySpec::PerSymbol(es),
        _ => {
            let db = file.pick::<f64>(None, "ebn0_db")?;
            let e = file.pick::<f64>(None, "energy")?;
            let es = file.pick::<f64>(None, "es")?;
            match (db, e, es) {
                (None, None, None) => EnergySpec::EbN0Db(0.0),
                (Some(db), None, None) => EnergySpec::EbN0Db(db),
                (None, Some(e), None) => EnergySpec::Total(e),
                (None, None, Some(es)) => EnergySpec::PerSymbol(es),
                _ => return Err(CliError::Usage("config sets more than one of ebn0_db, energy, es".into())),
            }
        }
    };
    let unit = file.pick_enum(args.distance_unit, "distance_unit")?.unwrap_or(UnitArg::TotalEnergy);
    let cfg = SystemConfig::new(m, n, k, epsilon, sigma2, energy)?.with_distance_unit(unit.into());
    Ok(cfg)
}

fn strict_flag(flag: bool, file: &ConfigFile) -> Result<bool, CliError> {
    Ok(flag || file.pick::<bool>(None, "strict")?.unwrap_or(false))
}

fn output_target(args: &OutputArgs, file: &ConfigFile, default: Format) -> Result<(Option<PathBuf>, Format), CliError> {
    let out = file.pick(args.out.clone(), "out")?;
    let format = file.pick_enum(args.format, "format")?.unwrap_or(default);
    Ok((out, format))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn to_csv<T: serde::Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    writer.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn cmd_compute(args: &ComputeArgs, file: &ConfigFile) -> Result<(), CliError> {
    let cfg = resolve_system(&args.system, file)?;
    let (out, format) = output_target(&args.output, file, Format::Json)?;
    let op = evaluate(&cfg)?;
    let bytes = match format {
        Format::Json => to_json(&ComputeReport::new(&op))?,
        Format::Csv => to_csv(&[BoundRow::new(None, &op)])?,
    };
    emit(out.as_deref(), &bytes)?;
    if strict_flag(args.strict, file)? && !op.rates.feasible {
        return Err(CliError::Infeasible("operating point is infeasible".into()));
    }
    Ok(())
}

fn sweep_point(base: &SystemConfig, axis: Axis, value: f64) -> Result<SystemConfig, CliError> {
    let cfg = match axis {
        Axis::Blocklength => base.with_blocklength(value as u32),
        Axis::Ebn0Db => base.with_energy(EnergySpec::EbN0Db(value)),
        Axis::Energy => base.with_energy(EnergySpec::Total(value)),
        Axis::Radius => {
            let eps = bler_from_radius(base.n, base.sigma(), value)?.value();
            base.with_epsilon(eps)
        }
    };
    cfg.validate()
        .map_err(|e| CliError::Usage(format!("grid value {value}: {e}")))?;
    Ok(cfg)
}

fn cmd_sweep(args: &SweepArgs, file: &ConfigFile) -> Result<(), CliError> {
    let axis = file
        .pick_enum(args.axis, "axis")?
        .ok_or_else(|| CliError::Usage("--axis is required".into()))?;
    let spec = file
        .pick(args.grid.clone(), "grid")?
        .ok_or_else(|| CliError::Usage("--grid is required".into()))?;
    let values = grid::parse_grid(&spec)?;
    let mut system = args.system.clone();
    if axis == Axis::Blocklength {
        // Each point sets its own n; the template takes the largest so that
        // k <= n holds while resolving it.
        system.n = grid::integer_grid(&values)?.into_iter().max();
    }
    let base = resolve_system(&system, file)?;
    let (out, format) = output_target(&args.output, file, Format::Csv)?;
    let configs: Vec<SystemConfig> = values
        .iter()
        .map(|&v| sweep_point(&base, axis, v))
        .collect::<Result<_, _>>()?;
    let points: Vec<OperatingPoint> = configs
        .par_iter()
        .map(evaluate)
        .collect::<Result<_, _>>()?;
    let rows: Vec<BoundRow> = values
        .iter()
        .zip(&points)
        .map(|(&v, op)| BoundRow::new(Some(v), op))
        .collect();
    let bytes = match format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&rows)?,
    };
    emit(out.as_deref(), &bytes)?;
    let infeasible = points.iter().filter(|p| !p.rates.feasible).count();
    if strict_flag(args.strict, file)? && infeasible > 0 {
        return Err(CliError::Infeasible(format!("{infeasible} of {} grid points are infeasible", points.len())));
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, file: &ConfigFile) -> Result<(), CliError> {
    let cfg = resolve_system(&args.system, file)?;
    let (out, format) = output_target(&args.output, file, Format::Json)?;
    let trials = file
        .pick(args.trials, "trials")?
        .ok_or_else(|| CliError::Usage("--trials is required".into()))?;
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let seed = file.pick(args.seed, "seed")?.unwrap_or(0);
    let codebook_seed = file
        .pick(args.codebook_seed, "codebook_seed")?
        .unwrap_or(seed.wrapping_add(CODEBOOK_SEED_OFFSET));
    let default_constellation = if cfg.m == 2 { ConstellationArg::Antipodal } else { ConstellationArg::Psk };
    let constellation = match file
        .pick_enum(args.constellation, "constellation")?
        .unwrap_or(default_constellation)
    {
        ConstellationArg::Antipodal => Constellation::Antipodal,
        ConstellationArg::Psk => Constellation::Psk,
    };
    let dims = match constellation {
        Constellation::Antipodal => cfg.n,
        Constellation::Psk => 2 * cfg.n,
    };
    let sigma = cfg.sigma();
    let radius = decision_radius(dims, sigma, cfg.epsilon)?;
    let es = cfg.symbol_energy();
    // Smallest squared distance one differing symbol contributes.
    let symbol_delta2 = match constellation {
        Constellation::Antipodal => 4.0 * es,
        Constellation::Psk => 4.0 * es * (std::f64::consts::PI / cfg.m as f64).sin().powi(2),
    };
    let min_distance = match file.pick(args.min_distance, "min_distance")?.unwrap_or(MinDistance::At(1)) {
        MinDistance::At(d) => d,
        MinDistance::Auto => u32::try_from(min_hamming_for_radius(radius, symbol_delta2)).unwrap_or(u32::MAX),
    };
    let cb = gen_codebook(cfg.m, cfg.n, cfg.k, constellation, es, min_distance, codebook_seed)?;
    let summary = run_trials(&cb, sigma, radius, trials, seed)?;
    let op = evaluate(&cfg)?;
    let checks = SimulationChecks {
        error_ci_contains_epsilon: summary.error.contains(cfg.epsilon),
        confusion_within_upper_bound: summary.confusion.rate <= op.rates.pcon_ub.value(),
        confusion_at_least_lower_bound: summary.confusion.rate >= op.rates.pcon_lb.value(),
    };
    let measured = if cb.len() <= MEASURE_DISTANCE_LIMIT { cb.min_hamming_distance() } else { 0 };
    let report = SimulateReport {
        codebook: CodebookInfo {
            constellation,
            words: cb.len(),
            real_dimension: cb.dim(),
            symbol_energy: es,
            requested_min_distance: min_distance,
            min_hamming_distance: measured,
            seed: codebook_seed,
        },
        radius,
        summary,
        bounds: ComputeReport::new(&op),
        checks,
    };
    let bytes = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => to_csv(&[SimulateRow::new(&report)])?,
    };
    emit(out.as_deref(), &bytes)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse::<Suite>()?]
    };
    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        let report = run_suite(suite)?;
        let failed = report.failures().count();
        eprintln!(
            "{:<7} {} ({} of {} checks passed)",
            suite.name(),
            if report.passed { "PASS" } else { "FAIL" },
            report.checks.len() - failed,
            report.checks.len()
        );
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    emit(args.out.as_deref(), &to_json(&VerifyReport { passed, suites: reports })?)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed("some verification checks failed".into()))
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FBL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("FBL_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Compute(args) => cmd_compute(args, &file),
        Command::Sweep(args) => cmd_sweep(args, &file),
        Command::Simulate(args) => cmd_simulate(args, &file),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fbl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
