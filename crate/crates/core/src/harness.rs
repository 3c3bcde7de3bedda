//! Command-line experiments: argument model, dispatch, report rendering and
//! atomic output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{self, BoundsError};
use crate::configmodel::{self, ConfigError};
use crate::graph::{GraphError, MultiGraph};
use crate::independence::{self, Check};
use crate::packing::{self, ChiP};
use crate::rng;

pub const CSV_HEADER: &str = "#pcnlab v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "pcnlab", version, about = "Packing colorings of random cubic graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: ExperimentConfig,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum ExperimentConfig {
    /// Draw one uniform labeled cubic graph of girth at least `--girth`.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        girth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_tries: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the probability that a random pairing is simple with girth >= g.
    Montecarlo {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        girth: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact c_1, ..., c_imax of a graph file.
    Profile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        imax: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact packing chromatic number, up to `--kmax`.
    Chip {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kmax: u32,
        /// Add the class-capacity lower-bound certificate for `kmax`.
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Budget certificates for every k in `--k-from..=--k-to`.
    Certify {
        #[arg(long, default_value_t = 12)]
        k_from: u32,
        #[arg(long, default_value_t = 40)]
        k_to: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the ten density constants and the budget inequality.
    Constants {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-count identity audit on a (C1, C2) pair from a c_{1,2,4} triple.
    Audit124 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact independence ratios of girth-conditioned samples.
    Ratio {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        girth: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest n for the exact solver.
        #[arg(long, default_value_t = 100)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl ExperimentConfig {
    pub fn out(&self) -> Option<&Path> {
        match self {
            ExperimentConfig::Sample { out, .. }
            | ExperimentConfig::Montecarlo { out, .. }
            | ExperimentConfig::Profile { out, .. }
            | ExperimentConfig::Chip { out, .. }
            | ExperimentConfig::Certify { out, .. }
            | ExperimentConfig::Constants { out, .. }
            | ExperimentConfig::Audit124 { out, .. }
            | ExperimentConfig::Ratio { out, .. } => out.as_deref(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentConfig::Sample { .. } => "sample",
            ExperimentConfig::Montecarlo { .. } => "montecarlo",
            ExperimentConfig::Profile { .. } => "profile",
            ExperimentConfig::Chip { .. } => "chip",
            ExperimentConfig::Certify { .. } => "certify",
            ExperimentConfig::Constants { .. } => "constants",
            ExperimentConfig::Audit124 { .. } => "audit124",
            ExperimentConfig::Ratio { .. } => "ratio",
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: GraphError },
    #[error(transparent)]
    Config(ConfigError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

impl From<ConfigError> for HarnessError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::BadVertexCount(_) | ConfigError::GirthTooSmall(_) => HarnessError::Usage(e.to_string()),
            e => HarnessError::Config(e),
        }
    }
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(ConfigError::Exhausted { .. }) => 3,
            HarnessError::Bounds(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok,
    VerificationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub count: u64,
    pub mean: f64,
    pub std_error: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Self {
        let count = values.len() as u64;
        if values.is_empty() {
            return Aggregate { count, mean: 0.0, std_error: 0.0 };
        }
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let var = if values.len() > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
        Aggregate { count, mean, std_error: (var / m).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Body {
    /// Per-record rows with summary statistics.
    Table {
        columns: Vec<&'static str>,
        #[serde(skip)]
        rows: Vec<Vec<Value>>,
        records: Vec<Value>,
        aggregate: Option<Aggregate>,
        summary: Value,
    },
    /// A single JSON document.
    Document(Value),
    /// Raw text, e.g. a graph file.
    Text(String),
}

/// Everything a run produces. The wall-clock duration is kept out of the
/// rendered output so reruns are byte-identical.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub body: Body,
    pub outcome: Outcome,
    pub duration: Duration,
}

impl RunReport {
    fn table(columns: Vec<&'static str>, rows: Vec<Vec<Value>>, aggregate: Option<Aggregate>, summary: Value) -> Body {
        let records = rows
            .iter()
            .map(|row| Value::Object(columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect()))
            .collect();
        Body::Table { columns, rows, records, aggregate, summary }
    }

    pub fn records(&self) -> usize {
        match &self.body {
            Body::Table { rows, .. } => rows.len(),
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (&self.body, format) {
            (Body::Text(t), _) => t.clone(),
            (Body::Document(v), _) => pretty(v),
            (Body::Table { records, aggregate, summary, .. }, Format::Json) => pretty(&json!({
                "config": &self.config,
                "records": records,
                "aggregate": aggregate,
                "summary": summary,
                "outcome": self.outcome,
            })),
            (Body::Table { columns, rows, aggregate, summary, .. }, Format::Csv) => {
                let mut out = format!("{CSV_HEADER}\n");
                out.push_str(&columns.join(","));
                out.push('\n');
                for row in rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                if let Some(a) = aggregate {
                    let _ = writeln!(out, "# count={} mean={} std_error={}", a.count, a.mean, a.std_error);
                }
                if let Value::Object(map) = summary {
                    for (k, v) in map {
                        let _ = writeln!(out, "# {k}={}", csv_cell(v));
                    }
                }
                out
            }
        }
    }
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Writes via a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.to_path_buf(), source };
    let name = path.file_name().ok_or_else(|| HarnessError::Usage(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

pub fn read_graph(path: &Path) -> Result<MultiGraph, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    MultiGraph::parse(&text).map_err(|source| HarnessError::Input { path: path.to_path_buf(), source })
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), HarnessError> {
    if cond {
        Ok(())
    } else {
        Err(HarnessError::Usage(msg()))
    }
}

/// Format the report should be rendered in.
pub fn format_of(config: &ExperimentConfig) -> Format {
    match config {
        ExperimentConfig::Montecarlo { format, .. }
        | ExperimentConfig::Profile { format, .. }
        | ExperimentConfig::Certify { format, .. }
        | ExperimentConfig::Constants { format, .. }
        | ExperimentConfig::Ratio { format, .. } => *format,
        _ => Format::Json,
    }
}

/// Expected tries above which `sample` warns.
const WARN_GIRTH: usize = 7;

pub fn run(config: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let (body, outcome) = dispatch(config)?;
    Ok(RunReport { config: config.clone(), body, outcome, duration: start.elapsed() })
}

fn dispatch(config: &ExperimentConfig) -> Result<(Body, Outcome), HarnessError> {
    match config {
        &ExperimentConfig::Sample { n, girth, seed, max_tries, .. } => {
            let max_tries = match max_tries {
                Some(t) => t,
                None => configmodel::default_max_tries(girth)?,
            };
            if girth >= WARN_GIRTH {
                eprintln!(
                    "warning: expected tries at girth {girth} is about {:.0}",
                    1.0 / configmodel::girth_limit_probability(girth)?
                );
            }
            let sample = configmodel::sample_girth_conditioned(n, girth, seed, max_tries)?;
            Ok((Body::Text(sample.graph_text), Outcome::Ok))
        }
        &ExperimentConfig::Montecarlo { n, girth, trials, seed, .. } => {
            require(trials >= 1, || "--trials must be at least 1".into())?;
            let flags = configmodel::acceptance_flags(n, girth, trials, seed)?;
            let stats = configmodel::SampleStats::new(trials, flags.iter().filter(|&&a| a).count() as u64, seed);
            let rows = flags.iter().enumerate().map(|(t, &a)| vec![json!(t), json!(a as u8)]).collect();
            let aggregate = Aggregate { count: trials, mean: stats.acceptance_rate, std_error: stats.std_error };
            let summary = json!({
                "accepted": stats.accepted,
                "limit": configmodel::girth_limit_probability(girth)?,
            });
            Ok((RunReport::table(vec!["trial", "accepted"], rows, Some(aggregate), summary), Outcome::Ok))
        }
        ExperimentConfig::Profile { input, imax, .. } => {
            require(*imax >= 1, || "--imax must be at least 1".into())?;
            let g = read_graph(input)?;
            let profile = independence::independence_profile(&g, *imax);
            let rows = profile.c.iter().map(|s| vec![json!(s.i), json!(s.size), json!(s.witness)]).collect();
            Ok((RunReport::table(vec!["i", "c_i", "witness"], rows, None, json!({ "n": g.n() })), Outcome::Ok))
        }
        ExperimentConfig::Chip { input, kmax, certify, .. } => {
            let g = read_graph(input)?;
            let mut doc = match packing::chi_p(&g, *kmax) {
                ChiP::Exact { value, witness } => json!({
                    "chi_p": value,
                    "witness_coloring": witness.colors.iter().flatten().collect::<Vec<_>>(),
                }),
                ChiP::GreaterThan(k) => json!({ "greater_than": k }),
            };
            if *certify {
                doc["certificate_ledger"] = serde_json::to_value(packing::lower_bound_certificate(&g, *kmax)).expect("serializable");
            }
            Ok((Body::Document(doc), Outcome::Ok))
        }
        &ExperimentConfig::Certify { k_from, k_to, .. } => {
            require(k_from >= 1 && k_from <= k_to, || "need 1 <= --k-from <= --k-to".into())?;
            let mut rows = Vec::new();
            let mut outcome = Outcome::Ok;
            for k in k_from..=k_to {
                let row = match bounds::budget_certificate(k) {
                    Ok(c) => vec![json!(k), json!(c.total), json!(c.margin()), json!(true)],
                    Err(e) => {
                        eprintln!("k={k}: {e}");
                        outcome = Outcome::VerificationFailed;
                        vec![json!(k), Value::Null, Value::Null, json!(false)]
                    }
                };
                rows.push(row);
            }
            let summary = json!({ "head_sum": bounds::budget_certificate(k_to.max(12)).map(|c| c.head_sum.to_string()).ok() });
            Ok((RunReport::table(vec!["k", "total", "margin", "pass"], rows, None, summary), outcome))
        }
        ExperimentConfig::Constants { .. } => {
            let reports = bounds::verify_paper_constants();
            let mut outcome = Outcome::Ok;
            let mut rows: Vec<Vec<Value>> = reports
                .iter()
                .map(|r| {
                    if !r.pass {
                        outcome = Outcome::VerificationFailed;
                    }
                    vec![json!(r.family.function_name()), json!(r.k), json!(r.color), json!(r.x), json!(r.value), json!(r.paper_cap), json!(r.pass)]
                })
                .collect();
            let budget = bounds::budget_certificate(12);
            if budget.is_err() {
                outcome = Outcome::VerificationFailed;
            }
            let total = budget.as_ref().map(|c| c.total).ok();
            rows.push(vec![json!("budget"), Value::Null, Value::Null, Value::Null, json!(total), json!(1.0), json!(budget.is_ok())]);
            let columns = vec!["function", "k", "color", "x", "value", "cap", "pass"];
            Ok((RunReport::table(columns, rows, None, json!({})), outcome))
        }
        ExperimentConfig::Audit124 { input, seed, .. } => {
            let g = read_graph(input)?;
            let (triple, source) = if g.n() <= EXACT_JOINT_CAP {
                (independence::max_union_124(&g), "exact")
            } else {
                (independence::heuristic_union_124(&g, *seed), "heuristic")
            };
            let audit = independence::lemma10_audit(&g, &triple.c1, &triple.c2)
                .map_err(|e| HarnessError::Usage(format!("{}: {e}", input.display())))?;
            let outcome = if audit.holds { Outcome::Ok } else { Outcome::VerificationFailed };
            let mut doc = serde_json::to_value(&audit).expect("serializable");
            doc["triple"] = serde_json::to_value(&triple).expect("serializable");
            doc["triple_source"] = json!(source);
            Ok((Body::Document(doc), outcome))
        }
        &ExperimentConfig::Ratio { n, girth, trials, seed, cap, .. } => {
            let report = independence_ratio_experiment(n, girth, trials, seed, cap)?;
            Ok((RunReport::table(report.columns, report.rows, Some(report.aggregate), report.summary), report.outcome))
        }
    }
}

/// Largest graph for which `audit124` runs the exact joint search.
pub const EXACT_JOINT_CAP: usize = 30;

pub struct RatioReport {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub aggregate: Aggregate,
    pub summary: Value,
    pub outcome: Outcome,
    pub ratios: Vec<f64>,
}

/// Samples girth-conditioned graphs and computes the exact `c_1/n` of each.
pub fn independence_ratio_experiment(n: usize, girth: usize, trials: u64, seed: u64, cap: usize) -> Result<RatioReport, HarnessError> {
    require(trials >= 1, || "--trials must be at least 1".into())?;
    require(n <= cap, || format!("n = {n} exceeds the exact-solver cap {cap}; use a heuristic instead"))?;
    let max_tries = configmodel::default_max_tries(girth)?;
    type Trial = Result<(usize, Vec<usize>, bool), ConfigError>;
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let sample = configmodel::sample_girth_conditioned(n, girth, rng::mix(seed, t), max_tries)?;
            let best = independence::max_i_independent(&sample.graph, 1);
            let ok = independence::verify_i_independent(&sample.graph, &best.witness, 1) == Ok(Check::Valid);
            Ok((best.size, best.witness, ok))
        })
        .collect();
    let threshold = bounds::independence_ratio();
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    let mut outcome = Outcome::Ok;
    for (t, r) in results.into_iter().enumerate() {
        let (size, witness, ok) = r?;
        let ratio = size as f64 / n as f64;
        if !ok {
            outcome = Outcome::VerificationFailed;
        }
        ratios.push(ratio);
        rows.push(vec![json!(t), json!(size), json!(ratio), json!(ratio > threshold), json!(witness)]);
    }
    let exceeding = ratios.iter().filter(|&&r| r > threshold).count();
    let summary = json!({
        "max": ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        "exceeding": exceeding,
        "threshold": bounds::INDEPENDENCE_RATIO,
    });
    Ok(RatioReport {
        columns: vec!["trial", "c_1", "ratio", "exceeds", "witness"],
        rows,
        aggregate: Aggregate::of(&ratios),
        summary,
        outcome,
        ratios,
    })
}

/// Caps the global worker pool from `PCNLAB_THREADS`, if set.
pub fn configure_threads() -> Result<(), HarnessError> {
    if let Ok(v) = std::env::var("PCNLAB_THREADS") {
        let threads: usize = v.parse().ok().filter(|&t| t > 0).ok_or_else(|| HarnessError::Usage(format!("PCNLAB_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| HarnessError::Usage(e.to_string()))?;
    }
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = configure_threads().and_then(|()| run(&cli.command));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = report.render(format_of(&cli.command));
    let written = match cli.command.out() {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    eprintln!("{} finished in {:.3}s", cli.command.name(), report.duration.as_secs_f64());
    match report.outcome {
        Outcome::Ok => 0,
        Outcome::VerificationFailed => {
            eprintln!("error: verification failed");
            2
        }
    }
}
