//! Helpers shared by the integration suites. Not every binary uses every
//! helper.
#![allow(dead_code)]

use argrain::process::{simulate, InterventionSpec, ModelParams};
use argrain::stats::thinning_factor;

/// Simulates `n_effective * thinning` stationary steps and returns the raw
/// `(x, y)` series plus the thinning factor used.
pub fn raw_series(
  params: &ModelParams,
  n_effective: usize,
  seed: u64,
  intervention: Option<&InterventionSpec>,
) -> (Vec<f64>, Vec<f64>, usize) {
  let k = thinning_factor(params);
  let traj = simulate(params, n_effective * k, None, seed, intervention).unwrap();
  (traj.xs().to_vec(), traj.ys().to_vec(), k)
}

/// Every `k`-th element, for estimators that want near-independent samples.
pub fn every_kth(series: &[f64], k: usize) -> Vec<f64> {
  series.iter().copied().step_by(k).collect()
}
