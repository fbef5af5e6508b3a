//! Parameter resolution: defaults, then the JSON config file, then
//! command-line flags, with flags winning. Every command validates the
//! fields it actually needs and reports the offending field by name.

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;

/// Shared command-line flags; all optional here, validated per command.
#[derive(clap::Args, Debug, Default, Clone)]
pub struct Args {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Degree.
    #[arg(long)]
    pub d: Option<usize>,
    /// Supercriticality parameter; retention probability is (1+epsilon)/d.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Spectral-ratio target.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of trials.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Input graph file (graph text format).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Output directory for report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Numeric tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Retry budget for the cycle pipeline.
    #[arg(long)]
    pub retries: Option<usize>,
    /// Stream per-exposure region sizes to trace.csv.
    #[arg(long)]
    pub trace: bool,
    /// Selector: construction kind or oracle query.
    #[arg(long)]
    pub what: Option<String>,
    /// Epsilon grid for sweeps (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub epsilon_grid: Vec<f64>,
    /// Degree grid for sweeps (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub d_grid: Vec<usize>,
    /// Vertex-count grid for sweeps (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Vec<usize>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    d: Option<usize>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    seed: Option<u64>,
    trials: Option<usize>,
    graph: Option<PathBuf>,
    out: Option<PathBuf>,
    tol: Option<f64>,
    retries: Option<usize>,
    trace: Option<bool>,
    what: Option<String>,
    epsilon_grid: Option<Vec<f64>>,
    d_grid: Option<Vec<usize>>,
    n_grid: Option<Vec<usize>>,
}

/// Fully resolved parameters.
#[derive(Debug, Clone)]
pub struct Params {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub seed: u64,
    pub trials: usize,
    pub graph: Option<PathBuf>,
    pub out: PathBuf,
    pub tol: f64,
    pub retries: usize,
    pub trace: bool,
    pub what: Option<String>,
    pub epsilon_grid: Vec<f64>,
    pub d_grid: Vec<usize>,
    pub n_grid: Vec<usize>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or input files: exit code 2.
    Invalid(String),
    /// A resolved operation failed: exit code 3.
    Operation(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid configuration: {m}"),
            CliError::Operation(m) => write!(f, "operation failed: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Operation(_) => 3,
        }
    }
}

pub fn resolve(args: &Args) -> Result<Params, CliError> {
    let file: FileConfig = match &args.config {
        None => FileConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Invalid(format!("config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Invalid(format!("config {}: {e}", path.display()))
            })?
        }
    };
    let params = Params {
        n: args.n.or(file.n),
        d: args.d.or(file.d),
        epsilon: args.epsilon.or(file.epsilon),
        delta: args.delta.or(file.delta),
        seed: args.seed.or(file.seed).unwrap_or(0),
        trials: args.trials.or(file.trials).unwrap_or(1),
        graph: args.graph.clone().or(file.graph),
        out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        tol: args.tol.or(file.tol).unwrap_or(1e-10),
        retries: args.retries.or(file.retries).unwrap_or(20),
        trace: args.trace || file.trace.unwrap_or(false),
        what: args.what.clone().or(file.what),
        epsilon_grid: if args.epsilon_grid.is_empty() {
            file.epsilon_grid.unwrap_or_default()
        } else {
            args.epsilon_grid.clone()
        },
        d_grid: if args.d_grid.is_empty() {
            file.d_grid.unwrap_or_default()
        } else {
            args.d_grid.clone()
        },
        n_grid: if args.n_grid.is_empty() {
            file.n_grid.unwrap_or_default()
        } else {
            args.n_grid.clone()
        },
    };
    if params.trials == 0 {
        return Err(CliError::Invalid("`trials` must be at least 1".into()));
    }
    if let Some(t) = args.tol.or(file.tol) {
        if !(t > 0.0) {
            return Err(CliError::Invalid("`tol` must be positive".into()));
        }
    }
    Ok(params)
}

impl Params {
    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Invalid("`n` is required".into()))
    }

    pub fn require_d(&self) -> Result<usize, CliError> {
        self.d.ok_or_else(|| CliError::Invalid("`d` is required".into()))
    }

    pub fn require_epsilon(&self) -> Result<f64, CliError> {
        let eps = self
            .epsilon
            .ok_or_else(|| CliError::Invalid("`epsilon` is required".into()))?;
        if !(eps > 0.0) {
            return Err(CliError::Invalid("`epsilon` must be positive".into()));
        }
        Ok(eps)
    }

    pub fn require_delta(&self) -> Result<f64, CliError> {
        let delta = self
            .delta
            .ok_or_else(|| CliError::Invalid("`delta` is required".into()))?;
        if !(delta > 0.0) {
            return Err(CliError::Invalid("`delta` must be positive".into()));
        }
        Ok(delta)
    }

    pub fn require_graph(&self) -> Result<&PathBuf, CliError> {
        self.graph
            .as_ref()
            .ok_or_else(|| CliError::Invalid("`graph` is required".into()))
    }

    pub fn require_what(&self, allowed: &[&str]) -> Result<&str, CliError> {
        let what = self
            .what
            .as_deref()
            .ok_or_else(|| CliError::Invalid(format!("`what` is required (one of {allowed:?})")))?;
        if !allowed.contains(&what) {
            return Err(CliError::Invalid(format!(
                "`what` must be one of {allowed:?}, got `{what}`"
            )));
        }
        Ok(what)
    }
}
