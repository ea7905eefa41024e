//! Command-line entry point.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on validation or budget
//! errors (and I/O failures).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::config::{ConfigError, RunConfig};
use crate::ensemble::{self, CanonicalLaw, EnsembleError, LocalStatistic, SamplingBudget};
use crate::greedy::{self, DecomposeError};
use crate::legal::{self, CoefficientString, ForbiddenPattern, LegalError};
use crate::matrix::{self, MatrixError, MatrixReport};
use crate::output::{self, fmt_f64_cell, Csv};
use crate::recurrence::{
    self, generate_sequence, RootError, SequenceTable, SpecError, ValidatedSpec,
    DEFAULT_ROOT_TOLERANCE,
};
use crate::report::{self, ReportError, ReportInputs, ReportParams};
use crate::stats::{self, DistributionMethod, StatsError};

#[derive(Parser, Debug)]
#[command(
    name = "zlrr",
    version,
    about = "Greedy and legal decompositions over zero linear recurrences"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Plain-text key = value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Recurrence coefficients c_1..c_L, comma separated.
    #[arg(long, global = true)]
    pub coeffs: Option<String>,
    /// Initial terms Z_0..Z_{L-1}, comma separated.
    #[arg(long, global = true)]
    pub init: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; ZLRR_WORKERS caps this.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Largest interval scanned integer by integer.
    #[arg(long, global = true)]
    pub enum_budget: Option<u64>,
    /// Largest number of memoized states in a d(N) search.
    #[arg(long, global = true)]
    pub node_budget: Option<usize>,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sequence terms as CSV (n,Z_n).
    Seq {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy decomposition as JSON (batch mode: CSV m,k,indices,gaps).
    Decompose {
        #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
        m: Option<String>,
        /// File with one integer per line.
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact summand-count distributions as CSV (N,k,count).
    Stats {
        #[arg(long, default_value_t = 10)]
        n_min: usize,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Dp)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-N moments and KS distance as CSV (N,mean,variance,ks).
        #[arg(long)]
        moments: Option<PathBuf>,
    },
    /// Pooled gap histogram as CSV (g,count,probability).
    Gaps {
        #[arg(long)]
        n: usize,
        /// Only count gaps whose lower summand index is at least this.
        #[arg(long, default_value_t = 0)]
        min_lower_index: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Log-linear decay fit as JSON.
        #[arg(long)]
        fit: Option<PathBuf>,
    },
    /// Count (and optionally list) legal strings.
    Strings {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "1100")]
        pattern: String,
        /// Also list every legal string (length at most 20).
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of legal decompositions d(N).
    Count {
        #[arg(long)]
        n: String,
        /// Top index of the coefficient string; defaults to the largest j
        /// with Z_j <= N.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value = "1100")]
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// d(k) for every k < Z_L as CSV (k,d(k)), summary as JSON.
    Dtotal {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "1100")]
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Transfer matrix summary as JSON.
    Matrix {
        #[arg(long, value_enum, default_value_t = MatrixSource::Derived)]
        source: MatrixSource,
        #[arg(long, default_value = "1100")]
        pattern: String,
        #[arg(long)]
        charpoly: bool,
        #[arg(long)]
        perron: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ensemble experiments.
    Ensemble {
        #[command(subcommand)]
        command: EnsembleCommand,
    },
    /// Discrepancy report as JSON.
    Report {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum EnsembleCommand {
    /// Micro and canonical expectations of a local statistic.
    Compare {
        #[arg(long)]
        n: usize,
        /// gap2, constant, or presence:<offset>.
        #[arg(long, default_value = "gap2")]
        stat: String,
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = LawArg::Table)]
        law: LawArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// log d(N)/L for N sampled from [Z_L, Z_{L+1}), as CSV.
    Concentrate {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value = "1100")]
        pattern: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum MethodArg {
    Dp,
    Enumerate,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum MatrixSource {
    Paper,
    Derived,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum LawArg {
    /// Smallest greedy gap read from the table, tail weights λ^{-g}.
    Table,
    /// Geometric decrements from 1 with ratio 1/λ.
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Validation,
    Budget,
    Io,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage => 1,
            _ => 2,
        }
    }
}

macro_rules! classify {
    ($ty:ty, $($budget:pat),+) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                #[allow(unreachable_patterns)]
                let kind = match &e {
                    $($budget => ErrorKind::Budget,)+
                    _ => ErrorKind::Validation,
                };
                CliError::new(kind, e.to_string())
            }
        }
    };
}

classify!(StatsError, StatsError::BudgetExceeded { .. });
classify!(
    LegalError,
    LegalError::BudgetExceeded(_),
    LegalError::ValueBudgetExceeded { .. }
);
classify!(
    EnsembleError,
    EnsembleError::BudgetExceeded { .. },
    EnsembleError::Legal(LegalError::BudgetExceeded(_))
);
macro_rules! validation {
    ($($ty:ty),+) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new(ErrorKind::Validation, e.to_string())
            }
        })+
    };
}

validation!(
    DecomposeError,
    ConfigError,
    RootError,
    MatrixError,
    SpecError
);

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Stats(e) => e.into(),
            ReportError::Legal(e) => e.into(),
            ReportError::Ensemble(e) => e.into(),
            other => CliError::new(ErrorKind::Validation, other.to_string()),
        }
    }
}

/// Parses `argv` (including the program name), runs the command, and returns
/// the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let label = match e.kind {
                ErrorKind::Usage => "usage error",
                ErrorKind::Validation => "validation error",
                ErrorKind::Budget => "budget error",
                ErrorKind::Io => "i/o error",
            };
            eprintln!("{label}: {}", e.message);
            e.exit_code()
        }
    }
}

fn effective_config(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &global.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::new(ErrorKind::Io, format!("{}: {e}", path.display())))?;
        config.apply_text(&text)?;
    }
    if let Some(v) = &global.coeffs {
        config.set("coeffs", v)?;
    }
    if let Some(v) = &global.init {
        config.set("init", v)?;
    }
    if let Some(v) = global.seed {
        config.seed = v;
    }
    if let Some(v) = global.workers {
        config.set("workers", &v.to_string())?;
    }
    if let Some(v) = global.enum_budget {
        config.enum_budget = v;
    }
    if let Some(v) = global.node_budget {
        config.node_budget = v;
    }
    Ok(config)
}

fn configure_workers(config: &RunConfig) -> Result<(), CliError> {
    let env_cap = match std::env::var("ZLRR_WORKERS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|&w| w > 0)
                .ok_or_else(|| {
                    CliError::new(ErrorKind::Validation, format!("ZLRR_WORKERS={v:?}"))
                })?,
        ),
        Err(_) => None,
    };
    let workers = match (config.workers, env_cap) {
        (Some(w), Some(cap)) => Some(w.min(cap)),
        (w, cap) => w.or(cap),
    };
    if let Some(w) = workers {
        // A pool that already exists (repeated in-process calls) is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::new(ErrorKind::Io, format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(ErrorKind::Io, e.to_string())),
    }
}

fn parse_big(text: &str) -> Result<BigUint, CliError> {
    text.trim().parse().map_err(|_| {
        CliError::new(
            ErrorKind::Validation,
            format!("not a non-negative integer: {text:?}"),
        )
    })
}

fn parse_pattern(text: &str) -> Result<ForbiddenPattern, CliError> {
    Ok(text.parse::<ForbiddenPattern>()?)
}

/// Table reaching index `n` plus a margin, so greedy scans up to `Z_{n+1}`
/// stay inside it.
fn table_through(spec: &ValidatedSpec, n: usize) -> Result<SequenceTable, CliError> {
    let table = generate_sequence(spec, n + 8);
    let top = table.term(n + 1).clone();
    let covering = SequenceTable::covering(spec, &top, 2)?;
    Ok(if covering.len() > table.len() {
        covering
    } else {
        table
    })
}

#[derive(Serialize)]
struct DecomposeOut {
    #[serde(serialize_with = "output::biguint_as_string")]
    m: BigUint,
    indices: Vec<usize>,
    values: Vec<String>,
    k: usize,
    gaps: Vec<usize>,
}

#[derive(Serialize)]
struct StringsOut {
    length: usize,
    pattern: String,
    #[serde(serialize_with = "output::biguint_as_string")]
    count: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    strings: Option<Vec<String>>,
}

#[derive(Serialize)]
struct CountOut {
    #[serde(serialize_with = "output::biguint_as_string")]
    n: BigUint,
    cap: usize,
    pattern: String,
    #[serde(serialize_with = "output::biguint_as_string")]
    d: BigUint,
}

#[derive(Serialize)]
struct GapFitOut<'a> {
    n: usize,
    min_lower_index: usize,
    k_min: usize,
    k_max: usize,
    total_gaps: u64,
    fit: &'a stats::DecayFit,
    #[serde(serialize_with = "output::f64_as_f17")]
    log_lambda1: f64,
}

#[derive(Serialize)]
struct ConcentrationSummary<'a> {
    length: usize,
    seed: u64,
    n_samples: usize,
    #[serde(serialize_with = "output::opt_f64_as_f17")]
    mean: Option<f64>,
    #[serde(serialize_with = "output::opt_f64_as_f17")]
    std_dev: Option<f64>,
    zero_count: usize,
    #[serde(serialize_with = "output::f64_as_f17")]
    k_reference: f64,
    #[serde(serialize_with = "output::f64_as_f17")]
    k_measured: f64,
    pattern: &'a str,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = effective_config(&cli.global)?;
    if cli.global.dump_config {
        return emit(None, &config.to_string());
    }
    let Some(command) = cli.command else {
        return Err(CliError::new(
            ErrorKind::Usage,
            "a subcommand is required (see --help)",
        ));
    };
    configure_workers(&config)?;
    let spec = config.spec()?;

    match command {
        Command::Seq { n, out } => {
            let table = generate_sequence(&spec, n);
            let mut csv = Csv::with_header(&["n", "Z_n"]);
            for (i, z) in table.terms().iter().enumerate() {
                csv.row([i.to_string(), z.to_string()]);
            }
            emit(out.as_deref(), &csv.into_string())
        }
        Command::Decompose { m, batch, out } => {
            let single = m.is_some();
            let values: Vec<BigUint> = match (m, batch) {
                (Some(m), _) => vec![parse_big(&m)?],
                (None, Some(path)) => fs::read_to_string(&path)
                    .map_err(|e| CliError::new(ErrorKind::Io, format!("{}: {e}", path.display())))?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(parse_big)
                    .collect::<Result<_, _>>()?,
                (None, None) => {
                    return Err(CliError::new(
                        ErrorKind::Usage,
                        "--m or --batch is required",
                    ))
                }
            };
            let largest = values.iter().max().cloned().unwrap_or_default();
            let table = SequenceTable::covering(&spec, &largest, 2)?;
            let results = values
                .into_iter()
                .map(|m| {
                    let d = greedy::greedy_decompose(&table, &m)?;
                    Ok(DecomposeOut {
                        values: d
                            .indices
                            .iter()
                            .map(|&i| table.term(i).to_string())
                            .collect(),
                        k: d.summand_count(),
                        gaps: d.gaps().gaps,
                        indices: d.indices,
                        m,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let text = if single {
                output::to_json(&results[0])
            } else {
                let join = |xs: &[usize]| {
                    xs.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let mut csv = Csv::with_header(&["m", "k", "indices", "gaps"]);
                for r in &results {
                    csv.row([
                        r.m.to_string(),
                        r.k.to_string(),
                        join(&r.indices),
                        join(&r.gaps),
                    ]);
                }
                csv.into_string()
            };
            emit(out.as_deref(), &text)
        }
        Command::Stats {
            n_min,
            n_max,
            method,
            out,
            moments,
        } => {
            if n_min > n_max {
                return Err(CliError::new(ErrorKind::Usage, "--n-min exceeds --n-max"));
            }
            let table = table_through(&spec, n_max)?;
            let method = match method {
                MethodArg::Dp => DistributionMethod::IntervalDp,
                MethodArg::Enumerate => DistributionMethod::Enumerate {
                    budget: config.enum_budget,
                },
            };
            let mut csv = Csv::with_header(&["N", "k", "count"]);
            let mut mcsv = Csv::with_header(&["N", "mean", "variance", "ks"]);
            for n in n_min..=n_max {
                let dist = stats::exact_summand_distribution(&table, n, method)?;
                for (k, c) in &dist.counts {
                    csv.row([n.to_string(), k.to_string(), c.to_string()]);
                }
                let m = stats::moments(&dist)?;
                let ks = stats::ks_vs_gaussian(&dist)
                    .map(fmt_f64_cell)
                    .unwrap_or_default();
                mcsv.row([
                    n.to_string(),
                    fmt_f64_cell(m.mean_f64()),
                    fmt_f64_cell(m.variance_f64()),
                    ks,
                ]);
            }
            if let Some(path) = moments {
                emit(Some(&path), &mcsv.into_string())?;
            }
            emit(out.as_deref(), &csv.into_string())
        }
        Command::Gaps {
            n,
            min_lower_index,
            k_min,
            k_max,
            out,
            fit,
        } => {
            let table = table_through(&spec, n)?;
            let hist =
                stats::exact_gap_distribution_from(&table, n, config.enum_budget, min_lower_index)?;
            let mut csv = Csv::with_header(&["g", "count", "probability"]);
            for (g, c) in &hist.counts {
                csv.row([
                    g.to_string(),
                    c.to_string(),
                    fmt_f64_cell(hist.probability(*g)),
                ]);
            }
            if let Some(path) = fit {
                let info = recurrence::dominant_root(
                    &table.characteristic_polynomial(),
                    DEFAULT_ROOT_TOLERANCE,
                )?;
                let decay = stats::fit_geometric_decay(&hist, k_min, k_max)?;
                let summary = GapFitOut {
                    n,
                    min_lower_index,
                    k_min,
                    k_max,
                    total_gaps: hist.total_gaps,
                    fit: &decay,
                    log_lambda1: info.log_lambda(),
                };
                emit(Some(&path), &output::to_json(&summary))?;
            }
            emit(out.as_deref(), &csv.into_string())
        }
        Command::Strings {
            length,
            pattern,
            enumerate,
            out,
        } => {
            let p = parse_pattern(&pattern)?;
            let count = legal::count_legal_strings(length, &p);
            let strings = if enumerate {
                if length > 20 {
                    return Err(CliError::new(
                        ErrorKind::Budget,
                        "--enumerate supports length <= 20",
                    ));
                }
                Some(
                    (0u32..1 << length)
                        .map(|mask| CoefficientString {
                            bits: (0..length).map(|i| mask >> i & 1 == 1).collect(),
                        })
                        .filter(|s| legal::is_legal(s, &p))
                        .map(|s| s.to_string())
                        .collect(),
                )
            } else {
                None
            };
            emit(
                out.as_deref(),
                &output::to_json(&StringsOut {
                    length,
                    pattern: p.to_string(),
                    count,
                    strings,
                }),
            )
        }
        Command::Count {
            n,
            cap,
            pattern,
            out,
        } => {
            let p = parse_pattern(&pattern)?;
            let target = parse_big(&n)?;
            let table = SequenceTable::covering(&spec, &target, 2)?;
            let cap = cap.unwrap_or_else(|| table.largest_index_at_most(&target).unwrap_or(0));
            let d = legal::count_decompositions_with_budget(
                &table,
                &target,
                &p,
                cap,
                config.node_budget,
            )?;
            emit(
                out.as_deref(),
                &output::to_json(&CountOut {
                    n: target,
                    cap,
                    pattern: p.to_string(),
                    d,
                }),
            )
        }
        Command::Dtotal {
            length,
            pattern,
            out,
            summary,
        } => {
            let p = parse_pattern(&pattern)?;
            let table = table_through(&spec, length)?;
            let r = legal::total_decompositions(&table, length, &p, config.enum_budget)?;
            let mut csv = Csv::with_header(&["k", "d(k)"]);
            for (k, d) in r.d_values.iter().enumerate() {
                csv.row([k.to_string(), d.to_string()]);
            }
            match (out, summary) {
                (Some(out), summary) => {
                    emit(Some(&out), &csv.into_string())?;
                    if let Some(path) = summary {
                        emit(Some(&path), &output::to_json(&r))?;
                    }
                    Ok(())
                }
                (None, Some(path)) => {
                    emit(Some(&path), &output::to_json(&r))?;
                    emit(None, &csv.into_string())
                }
                (None, None) => emit(None, &output::to_json(&r)),
            }
        }
        Command::Matrix {
            source,
            pattern,
            charpoly,
            perron,
            out,
        } => {
            let (t, label) = match source {
                MatrixSource::Paper => (matrix::paper_matrix(), "paper".to_string()),
                MatrixSource::Derived => {
                    let p = parse_pattern(&pattern)?;
                    (matrix::build_transfer_matrix(&p)?, format!("derived:{p}"))
                }
            };
            let report = MatrixReport {
                source: label,
                row_sums: t.row_sums(),
                char_poly: charpoly.then(|| matrix::char_poly_report(&t)),
                perron: if perron {
                    Some(matrix::perron_eigenvalue(
                        &t,
                        matrix::DEFAULT_PERRON_TOLERANCE,
                    )?)
                } else {
                    None
                },
                entries: t.entries,
                state_labels: t.state_labels,
            };
            emit(out.as_deref(), &output::to_json(&report))
        }
        Command::Ensemble { command } => run_ensemble(command, &config, &spec),
        Command::Report { out } => {
            let table = generate_sequence(&spec, 200);
            let params = ReportParams {
                seed: config.seed,
                enumeration_budget: config.enum_budget,
                node_budget: config.node_budget,
                ..ReportParams::default()
            };
            let inputs = ReportInputs::compute(&table, &params)?;
            let report = report::build_discrepancy_report(&inputs)?;
            emit(out.as_deref(), &output::to_json(&report))
        }
    }
}

fn run_ensemble(
    command: EnsembleCommand,
    config: &RunConfig,
    spec: &ValidatedSpec,
) -> Result<(), CliError> {
    match command {
        EnsembleCommand::Compare {
            n,
            stat,
            window,
            samples,
            law,
            out,
        } => {
            let table = generate_sequence(spec, (n + 8).max(200));
            let info = recurrence::dominant_root(
                &table.characteristic_polynomial(),
                DEFAULT_ROOT_TOLERANCE,
            )?;
            let law = match law {
                LawArg::Table => CanonicalLaw::from_table(&table, &info)?,
                LawArg::Geometric => CanonicalLaw::geometric(info.lambda1, 1)?,
            };
            let statistic = parse_statistic(&stat, window)?;
            let budget = SamplingBudget {
                exact_limit: config.enum_budget,
                samples,
            };
            let result =
                ensemble::compare_ensembles(&table, &statistic, n, law, budget, config.seed)?;
            emit(out.as_deref(), &output::to_json(&result))
        }
        EnsembleCommand::Concentrate {
            length,
            samples,
            pattern,
            out,
            summary,
        } => {
            let p = parse_pattern(&pattern)?;
            let table = generate_sequence(spec, (length + 8).max(200));
            let info = recurrence::dominant_root(
                &table.characteristic_polynomial(),
                DEFAULT_ROOT_TOLERANCE,
            )?;
            let r = ensemble::concentration_experiment(
                &table,
                &info,
                length,
                samples,
                config.seed,
                &p,
                config.node_budget,
            )?;
            let mut csv = Csv::with_header(&["sample_index", "N", "d", "log_d_over_L"]);
            for s in &r.samples {
                csv.row([
                    s.sample_index.to_string(),
                    s.value.to_string(),
                    s.d.to_string(),
                    fmt_f64_cell(s.log_d_over_l),
                ]);
            }
            if let Some(path) = summary {
                let text = output::to_json(&ConcentrationSummary {
                    length,
                    seed: r.seed,
                    n_samples: r.samples.len(),
                    mean: r.mean,
                    std_dev: r.std_dev,
                    zero_count: r.zero_count,
                    k_reference: r.k_reference,
                    k_measured: r.k_measured,
                    pattern: &pattern,
                });
                emit(Some(&path), &text)?;
            }
            emit(out.as_deref(), &csv.into_string())
        }
    }
}

fn parse_statistic(name: &str, window: usize) -> Result<LocalStatistic, CliError> {
    let bad = || CliError::new(ErrorKind::Usage, format!("unknown statistic {name:?}"));
    if window == 0 {
        return Err(CliError::new(ErrorKind::Usage, "--window must be positive"));
    }
    match name {
        "gap2" => Ok(LocalStatistic::gap_at_least(2, window)),
        "constant" => Ok(LocalStatistic::constant(1.0, window)),
        other => {
            let offset: usize = other
                .strip_prefix("presence:")
                .and_then(|o| o.parse().ok())
                .ok_or_else(bad)?;
            if offset >= window {
                return Err(CliError::new(
                    ErrorKind::Usage,
                    "presence offset must be below --window",
                ));
            }
            Ok(LocalStatistic::presence_at(offset, window))
        }
    }
}
