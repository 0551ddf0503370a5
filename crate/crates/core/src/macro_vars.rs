//! Macro-variables: coarse-graining the micro process with kernels.
//!
//! A kernel pair `(f, g)` defines macro-variables `X_f = sum_t f(t) X_t`
//! and `Y_g = sum_t g(t) Y_t`. When `f` is the compatible partner of `g`
//! (see [`crate::kernel::compatible_partner`]), the pair carries the micro
//! model onto a one-step macro model
//!
//! ```text
//! Y_g = X_f + E,    E ~ N(0, macro_noise_variance_y(g)),  E independent of X_f
//! ```
//!
//! and interventions commute with the coarse-graining: clamping the micro
//! `X` path acts on the macro level purely through the value of `X_f`.
//! [`exact_transformation_check`] verifies all of this by simulation and
//! reports named verdicts; handing it a mismatched pair (for example
//! `f = g = delta`) makes the interventional check fail, which is exactly
//! the micro-level regression/causation gap.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{compatible_partner, macro_noise_variance_y, Kernel, TruncationPolicy};
use crate::process::{simulate_window, InterventionSpec, ModelParams, Trajectory};
use crate::rng::derive_seed;
use crate::stats::{
  absolute_check, estimate_moments, regression_slope, relative_check, stderr_check,
  CheckVerdict, EstimateWithStderr, Status,
};

/// How a macro sample was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Regime {
  Observational,
  Intervened(InterventionSpec),
}

/// One joint draw of the macro pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroSample {
  pub x_macro: Complex64,
  pub y_macro: Complex64,
  pub regime: Regime,
  /// Retained trajectory window the sample was computed from.
  pub window: (i64, i64),
}

/// `sum_t k(t) X_t` over the trajectory. The retained window must cover the
/// kernel support.
pub fn macro_value_x(traj: &Trajectory, k: &Kernel) -> Result<Complex64> {
  weighted_sum(traj, k, traj.xs())
}

/// `sum_t k(t) Y_t` over the trajectory.
pub fn macro_value_y(traj: &Trajectory, k: &Kernel) -> Result<Complex64> {
  weighted_sum(traj, k, traj.ys())
}

fn weighted_sum(traj: &Trajectory, k: &Kernel, series: &[f64]) -> Result<Complex64> {
  let Some((k_lo, k_hi)) = k.support() else {
    return Ok(Complex64::ZERO);
  };
  let (w_lo, w_hi) = traj.window();
  if k_lo < w_lo || k_hi > w_hi {
    return Err(Error::SupportNotCovered {
      kernel_lo: k_lo,
      kernel_hi: k_hi,
      window_lo: w_lo,
      window_hi: w_hi,
    });
  }
  let mut acc = Complex64::ZERO;
  for (t, v) in k.iter() {
    acc += v * series[(t - w_lo) as usize];
  }
  Ok(acc)
}

/// Union of the supports of `f` and `g`; the trajectory window every joint
/// sample needs.
fn joint_window(f: &Kernel, g: &Kernel) -> Result<(i64, i64)> {
  let supports = [f.support(), g.support()];
  let mut acc: Option<(i64, i64)> = None;
  for s in supports.into_iter().flatten() {
    acc = Some(match acc {
      None => s,
      Some((lo, hi)) => (lo.min(s.0), hi.max(s.1)),
    });
  }
  acc.ok_or_else(|| Error::invalid("g", "cannot sample macro values of the zero kernel"))
}

/// Draws `n` independent joint samples of `(X_{f_g}, Y_g)` from stationary
/// observational trajectories. Replica `i` uses RNG stream `i` under
/// `seed`. The trajectory window extends the kernel supports by the default
/// burn-in margin on the past side, so the retained states are stationary
/// to well below statistical resolution.
pub fn sample_joint_macro(
  params: &ModelParams,
  g: &Kernel,
  n: usize,
  seed: u64,
  policy: &TruncationPolicy,
) -> Result<Vec<MacroSample>> {
  let f = compatible_partner(g, params, policy)?;
  let (w_lo, w_hi) = joint_window(&f, g)?;
  let mut out = Vec::with_capacity(n);
  for i in 0..n {
    let traj = simulate_window(params, w_lo, w_hi, None, seed, i as u64, None)?;
    out.push(MacroSample {
      x_macro: macro_value_x(&traj, &f)?,
      y_macro: macro_value_y(&traj, g)?,
      regime: Regime::Observational,
      window: (w_lo, w_hi),
    });
  }
  Ok(out)
}

/// Draws `n` samples of `Y_g` under the intervention, recording
/// `x_macro = sum_t x(t) f_g(t)`, the (deterministic) intervened value of
/// the macro `X`.
pub fn sample_interventional_macro(
  params: &ModelParams,
  g: &Kernel,
  intervention: &InterventionSpec,
  n: usize,
  seed: u64,
  policy: &TruncationPolicy,
) -> Result<Vec<MacroSample>> {
  intervention.validate()?;
  let f = compatible_partner(g, params, policy)?;
  let (w_lo, w_hi) = joint_window(&f, g)?;
  let x_macro: Complex64 =
    f.iter().map(|(t, v)| v * intervention.value_at(t)).sum();
  let mut out = Vec::with_capacity(n);
  for i in 0..n {
    let traj =
      simulate_window(params, w_lo, w_hi, None, seed, i as u64, Some(intervention))?;
    out.push(MacroSample {
      x_macro,
      y_macro: macro_value_y(&traj, g)?,
      regime: Regime::Intervened(intervention.clone()),
      window: (w_lo, w_hi),
    });
  }
  Ok(out)
}

/// Statistical tolerances for [`exact_transformation_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckTolerances {
  /// Stderr multiplier for mean comparisons.
  pub k_sigma: f64,
  /// Absolute band for the unit-slope check.
  pub slope_abs: f64,
  /// Relative band for the residual variance check.
  pub residual_var_rel: f64,
}

impl Default for CheckTolerances {
  fn default() -> Self {
    CheckTolerances { k_sigma: 3.0, slope_abs: 0.02, residual_var_rel: 0.03 }
  }
}

/// Everything [`exact_transformation_check`] measured, with one verdict per
/// claim of the macro-level model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformationReport {
  pub n_draws: usize,
  /// Clamped micro value used for the interventional batch.
  pub intervention_value: f64,
  /// Macro X value the intervention realizes, `sum_t x(t) f(t)`.
  pub x_macro_intervened: f64,
  pub slope: EstimateWithStderr,
  pub intercept: EstimateWithStderr,
  pub residual_variance: EstimateWithStderr,
  /// Closed-form macro noise variance the residuals must match.
  pub predicted_residual_variance: f64,
  pub interventional_mean: EstimateWithStderr,
  /// Observational conditional mean at the matched macro X value.
  pub predicted_interventional_mean: EstimateWithStderr,
  pub interventional_variance: EstimateWithStderr,
  pub checks: Vec<CheckVerdict>,
}

impl TransformationReport {
  pub fn check(&self, name: &str) -> Option<&CheckVerdict> {
    self.checks.iter().find(|c| c.name == name)
  }

  pub fn all_pass(&self) -> bool {
    self.checks.iter().all(|c| c.status == Status::Pass)
  }
}

/// Verifies the macro-level model claims for a real kernel `g` by
/// simulation:
///
/// 1. `slope_is_unit`: regressing `Y_g` on `X_f` over joint observational
///    draws recovers slope 1.
/// 2. `residual_variance_matches`: the regression residual variance equals
///    the closed-form macro noise variance of `g`.
/// 3. `interventional_mean_matches_conditional` and
///    `interventional_variance_matches_conditional`: clamping the micro `X`
///    so that `X_f = x*` reproduces the observational conditional of `Y_g`
///    at `x*` in mean and variance.
///
/// `f_override` substitutes a deliberate replacement for the compatible
/// partner; with a mismatched pair the interventional checks must fail,
/// which is the transformed statement of the micro regression/causation
/// gap. When the partner kernel is zero (`beta = 0`), the slope checks
/// degrade to a zero-covariance check and the interventional comparison is
/// carried out at `x* = 0`.
pub fn exact_transformation_check(
  params: &ModelParams,
  g: &Kernel,
  f_override: Option<&Kernel>,
  n_draws: usize,
  seed: u64,
  tolerances: &CheckTolerances,
  policy: &TruncationPolicy,
) -> Result<TransformationReport> {
  if !g.is_real() {
    return Err(Error::KernelNotReal);
  }
  if let Some(f) = f_override {
    if !f.is_real() {
      return Err(Error::KernelNotReal);
    }
  }
  if n_draws < 100 {
    return Err(Error::TooFewSamples { required: 100, actual: n_draws });
  }
  let f = match f_override {
    Some(f) => f.clone(),
    None => compatible_partner(g, params, policy)?,
  };
  let (w_lo, w_hi) = joint_window(&f, g)?;
  let predicted_residual_variance = macro_noise_variance_y(g, params, policy)?;

  // Joint observational draws.
  let mut xs = Vec::with_capacity(n_draws);
  let mut ys = Vec::with_capacity(n_draws);
  for i in 0..n_draws {
    let traj = simulate_window(params, w_lo, w_hi, None, seed, i as u64, None)?;
    xs.push(macro_value_x(&traj, &f)?.re);
    ys.push(macro_value_y(&traj, g)?.re);
  }

  // Interventional batch under do(X_t = c) with c scaled so the macro X
  // lands at x* = 2 when the partner has usable mass.
  let sum_f = f.sum().re;
  let intervention_value = if sum_f.abs() > 1e-9 { (2.0 / sum_f).clamp(-100.0, 100.0) } else { 1.0 };
  let x_star = intervention_value * sum_f;
  let intervention = InterventionSpec::Constant(intervention_value);
  let int_seed = derive_seed(seed, 1);
  let mut int_ys = Vec::with_capacity(n_draws);
  for i in 0..n_draws {
    let traj =
      simulate_window(params, w_lo, w_hi, None, int_seed, i as u64, Some(&intervention))?;
    int_ys.push(macro_value_y(&traj, g)?.re);
  }
  let int_moments = estimate_moments(&int_ys)?;
  let k = tolerances.k_sigma;

  let mut checks = Vec::new();
  let (slope, intercept, residual_variance, predicted_mean);
  if f.is_zero() {
    // Degenerate partner: X_f is identically zero, so the model claim
    // reduces to "Y_g is pure macro noise, uncorrelated with X_f".
    let y_m = estimate_moments(&ys)?;
    slope = EstimateWithStderr { value: 0.0, stderr: 0.0 };
    intercept = EstimateWithStderr { value: y_m.mean, stderr: y_m.mean_stderr };
    residual_variance = EstimateWithStderr { value: y_m.variance, stderr: y_m.variance_stderr };
    predicted_mean = EstimateWithStderr { value: y_m.mean, stderr: y_m.mean_stderr };
    checks.push(stderr_check("partner_covariance_is_zero", 0.0, 0.0, 0.0, k));
  } else {
    let fit = regression_slope(&xs, &ys)?;
    slope = EstimateWithStderr { value: fit.slope, stderr: fit.slope_stderr };
    intercept = EstimateWithStderr { value: fit.intercept, stderr: fit.intercept_stderr };
    residual_variance = EstimateWithStderr {
      value: fit.residual_variance,
      stderr: fit.residual_variance_stderr,
    };
    predicted_mean = fit.predict_mean(x_star);
    checks.push(absolute_check(
      "slope_is_unit",
      fit.slope,
      1.0,
      tolerances.slope_abs,
      fit.slope_stderr,
      k,
    ));
  }
  checks.push(relative_check(
    "residual_variance_matches",
    residual_variance.value,
    predicted_residual_variance,
    tolerances.residual_var_rel,
    residual_variance.stderr,
    k,
  ));
  let mean_combined = (int_moments.mean_stderr.powi(2) + predicted_mean.stderr.powi(2)).sqrt();
  checks.push(stderr_check(
    "interventional_mean_matches_conditional",
    int_moments.mean,
    predicted_mean.value,
    mean_combined,
    k,
  ));
  let var_combined =
    (int_moments.variance_stderr.powi(2) + residual_variance.stderr.powi(2)).sqrt();
  checks.push(stderr_check(
    "interventional_variance_matches_conditional",
    int_moments.variance,
    residual_variance.value,
    var_combined,
    k,
  ));

  Ok(TransformationReport {
    n_draws,
    intervention_value,
    x_macro_intervened: x_star,
    slope,
    intercept,
    residual_variance,
    predicted_residual_variance,
    interventional_mean: EstimateWithStderr {
      value: int_moments.mean,
      stderr: int_moments.mean_stderr,
    },
    predicted_interventional_mean: predicted_mean,
    interventional_variance: EstimateWithStderr {
      value: int_moments.variance,
      stderr: int_moments.variance_stderr,
    },
    checks,
  })
}
