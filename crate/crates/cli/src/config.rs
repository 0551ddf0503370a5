//! Run configuration with three precedence layers: built-in defaults, an
//! optional JSON config file, and command-line flags on top.

use std::path::PathBuf;

use argrain::kernel::TruncationPolicy;
use argrain::process::ModelParams;
use clap::Args;
use serde::{Deserialize, Serialize};

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonFlags {
  /// JSON config file; keys match these flag names. Flags win on conflict.
  #[arg(long, value_name = "FILE")]
  pub config: Option<PathBuf>,

  /// AR coefficient of X, |alpha| < 1.
  #[arg(long)]
  pub alpha: Option<f64>,

  /// Causal coefficient from X into Y.
  #[arg(long)]
  pub beta: Option<f64>,

  /// AR coefficient of Y, |gamma| < 1.
  #[arg(long)]
  pub gamma: Option<f64>,

  /// Standard deviation of X's noise.
  #[arg(long)]
  pub noise_std_x: Option<f64>,

  /// Standard deviation of Y's noise.
  #[arg(long)]
  pub noise_std_y: Option<f64>,

  /// RNG seed; every random quantity in a run derives from it.
  #[arg(long)]
  pub seed: Option<u64>,

  /// Sample budget. `simulate`: retained steps. `moments` and
  /// `negative-result`: effective samples after thinning. `theorem1`:
  /// replica draws per batch.
  #[arg(long)]
  pub n: Option<usize>,

  /// Steps discarded before the retained window; default adapts to the
  /// slowest AR mode.
  #[arg(long)]
  pub burn_in: Option<usize>,

  /// l1 tail bound for truncating operator inverses.
  #[arg(long)]
  pub tol: Option<f64>,

  /// Hard cap on series terms before truncation gives up.
  #[arg(long)]
  pub max_terms: Option<usize>,

  /// Comma-separated frequencies in [0, 1).
  #[arg(long, value_name = "NU,..", value_delimiter = ',')]
  pub nu_grid: Option<Vec<f64>>,

  /// Comma-separated window half-widths T.
  #[arg(long = "T", value_name = "T,..", value_delimiter = ',')]
  pub t_windows: Option<Vec<i64>>,

  /// Output file; stdout when omitted (data commands) or no report file
  /// (check commands).
  #[arg(long, value_name = "FILE")]
  pub out: Option<PathBuf>,

  /// Omit the timestamp header so identical configs give byte-identical
  /// outputs.
  #[arg(long)]
  pub no_timestamp: bool,
}

/// JSON config file contents. Unknown keys are rejected so typos surface
/// as errors naming the field.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOverrides {
  alpha: Option<f64>,
  beta: Option<f64>,
  gamma: Option<f64>,
  noise_std_x: Option<f64>,
  noise_std_y: Option<f64>,
  seed: Option<u64>,
  n: Option<usize>,
  burn_in: Option<usize>,
  tol: Option<f64>,
  max_terms: Option<usize>,
  nu_grid: Option<Vec<f64>>,
  t_windows: Option<Vec<i64>>,
}

/// Fully resolved configuration; serialized verbatim into every output for
/// provenance.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
  pub command: String,
  pub alpha: f64,
  pub beta: f64,
  pub gamma: f64,
  pub noise_std_x: f64,
  pub noise_std_y: f64,
  pub seed: u64,
  pub n: usize,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub burn_in: Option<usize>,
  pub tol: f64,
  pub max_terms: usize,
  pub nu_grid: Vec<f64>,
  pub t_windows: Vec<i64>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub do_x: Option<f64>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub g_offset: Option<i64>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub g_values: Option<Vec<f64>>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub mismatch: Option<bool>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub out: Option<String>,
  #[serde(skip_serializing_if = "Option::is_none")]
  pub cross_out: Option<String>,
}

impl RunConfig {
  /// Applies the precedence stack for `command`. Errors are diagnostics
  /// ready for stderr.
  pub fn resolve(command: &str, flags: &CommonFlags) -> Result<RunConfig, String> {
    let file = match &flags.config {
      Some(path) => {
        let text = std::fs::read_to_string(path)
          .map_err(|e| format!("config {}: {e}", path.display()))?;
        serde_json::from_str::<FileOverrides>(&text)
          .map_err(|e| format!("config {}: {e}", path.display()))?
      }
      None => FileOverrides::default(),
    };
    Ok(RunConfig {
      command: command.to_string(),
      alpha: flags.alpha.or(file.alpha).unwrap_or(0.5),
      beta: flags.beta.or(file.beta).unwrap_or(1.0),
      gamma: flags.gamma.or(file.gamma).unwrap_or(0.25),
      noise_std_x: flags.noise_std_x.or(file.noise_std_x).unwrap_or(1.0),
      noise_std_y: flags.noise_std_y.or(file.noise_std_y).unwrap_or(1.0),
      seed: flags.seed.or(file.seed).unwrap_or(1),
      n: flags.n.or(file.n).unwrap_or(25_000),
      burn_in: flags.burn_in.or(file.burn_in),
      tol: flags.tol.or(file.tol).unwrap_or(1e-12),
      max_terms: flags.max_terms.or(file.max_terms).unwrap_or(1_000_000),
      nu_grid: flags
        .nu_grid
        .clone()
        .or(file.nu_grid)
        .unwrap_or_else(|| vec![0.0, 0.1, 0.25, 0.5]),
      t_windows: flags
        .t_windows
        .clone()
        .or(file.t_windows)
        .unwrap_or_else(|| vec![50, 200, 800]),
      do_x: None,
      g_offset: None,
      g_values: None,
      mismatch: None,
      out: flags.out.as_ref().map(|p| p.display().to_string()),
      cross_out: None,
    })
  }

  pub fn params(&self) -> argrain::Result<ModelParams> {
    ModelParams::with_noise(
      self.alpha,
      self.beta,
      self.gamma,
      self.noise_std_x,
      self.noise_std_y,
    )
  }

  pub fn policy(&self) -> TruncationPolicy {
    TruncationPolicy { tol: self.tol, max_terms: self.max_terms }
  }
}
