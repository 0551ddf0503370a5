//! Provenance headers, file/stdout writing, and verdict rendering.

use std::io::Write;
use std::path::Path;

use argrain::stats::{CheckVerdict, Status, Tolerance};
use serde_json::json;

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything an output file must carry about its own production.
pub struct Meta {
  pub config: RunConfig,
  pub timestamp: Option<u64>,
}

impl Meta {
  pub fn new(config: RunConfig, no_timestamp: bool) -> Meta {
    let timestamp = (!no_timestamp).then(|| {
      std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
    });
    Meta { config, timestamp }
  }

  /// `# `-prefixed header lines for CSV outputs.
  pub fn comment_lines(&self) -> Vec<String> {
    let mut lines = vec![
      format!("argrain {VERSION}"),
      format!("config {}", serde_json::to_string(&self.config).expect("config serializes")),
    ];
    if let Some(ts) = self.timestamp {
      lines.push(format!("generated_unix {ts}"));
    }
    lines
  }

  /// JSON report envelope around command-specific `results`.
  pub fn json_report(&self, results: serde_json::Value) -> String {
    let mut doc = json!({
      "version": VERSION,
      "config": self.config,
      "results": results,
    });
    if let Some(ts) = self.timestamp {
      doc["generated_unix"] = json!(ts);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
  }
}

/// Writes to `path`, or stdout when absent.
pub fn write_text(path: Option<&Path>, content: &str) -> std::io::Result<()> {
  match path {
    Some(p) => std::fs::write(p, content),
    None => std::io::stdout().write_all(content.as_bytes()),
  }
}

pub fn status_label(status: Status) -> &'static str {
  match status {
    Status::Pass => "PASS",
    Status::Fail => "FAIL",
    Status::Inconclusive => "INCONCLUSIVE",
  }
}

fn tolerance_text(tol: &Tolerance) -> String {
  match tol {
    Tolerance::Absolute { tol } => format!("band +-{tol}"),
    Tolerance::Relative { tol } => format!("band +-{}% relative", tol * 100.0),
    Tolerance::StderrUnits { k_sigma, stderr } => {
      format!("within {k_sigma} x stderr {stderr:.3e}")
    }
  }
}

pub fn render_verdict(v: &CheckVerdict) -> String {
  format!(
    "[{}] {}: observed {:.6e} expected {:.6e} ({})",
    status_label(v.status),
    v.name,
    v.observed,
    v.expected,
    tolerance_text(&v.tolerance)
  )
}

pub fn render_verdicts(vs: &[CheckVerdict]) -> String {
  let mut out = String::new();
  for v in vs {
    out.push_str(&render_verdict(v));
    out.push('\n');
  }
  out
}
