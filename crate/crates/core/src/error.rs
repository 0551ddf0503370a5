//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
  /// A model parameter or operation argument violates its documented
  /// constraint. `name` identifies the offending field.
  #[error("invalid parameter `{name}`: {message}")]
  InvalidParam { name: &'static str, message: String },

  /// A truncated geometric series would need more terms than the policy
  /// allows before its tail bound drops below the tolerance.
  #[error("series truncation needs {required} terms but max_terms is {max_terms}")]
  TruncationBudget { required: usize, max_terms: usize },

  /// A kernel was paired with a trajectory whose retained window does not
  /// cover the kernel support.
  #[error(
    "kernel support [{kernel_lo}, {kernel_hi}] not covered by trajectory window [{window_lo}, {window_hi}]"
  )]
  SupportNotCovered {
    kernel_lo: i64,
    kernel_hi: i64,
    window_lo: i64,
    window_hi: i64,
  },

  /// A statistical estimator received fewer samples than it needs.
  #[error("estimator needs at least {required} samples, got {actual}")]
  TooFewSamples { required: usize, actual: usize },

  /// Regression on a constant (or empty) regressor.
  #[error("degenerate regressor: x values have zero variance")]
  DegenerateRegressor,

  /// An operation that works on real-valued kernels was handed one with a
  /// nonzero imaginary part.
  #[error("kernel has nonzero imaginary part; this check is defined for real kernels")]
  KernelNotReal,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
  pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
    Error::InvalidParam {
      name,
      message: message.into(),
    }
  }
}
