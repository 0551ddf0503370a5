//! Frequency-localized macro-variables and the decoupling of the macro
//! noise across frequencies.
//!
//! The windowed wave kernel `g_{nu,T}(t) = e^{2 pi i nu t} / sqrt(2T + 1)`
//! on `[-T, T]` is an approximate eigenvector of the shift: `S^j g` differs
//! from `z^j g` (with `z = e^{2 pi i nu}`) only at the window boundary, by
//! at most `2j / sqrt(2T + 1)` in l1. Consequently the compatible partner
//! of `g_{nu,T}` approaches `transfer_coefficient(nu) * g_{nu,T}` as the
//! window grows: the macro model becomes diagonal in frequency, with an
//! explicit per-frequency gain and noise floor. The pseudo-variance and
//! cross-frequency covariances quantify how fast the off-diagonal terms
//! die: both are O(1/T) for frequencies off the resonant pairings.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{
  compatible_partner, geometric_inverse_apply, inner_product, macro_noise_variance_x, Kernel,
  TruncationPolicy,
};
use crate::process::ModelParams;
use crate::rng::seeded_stream;
use crate::stats::{estimate_paired_moments, EstimateWithStderr};

/// `e^{2 pi i x}` evaluated from the fractional part of `x`, keeping the
/// trig argument small for large time indices.
fn phase_unit(x: f64) -> Complex64 {
  Complex64::from_polar(1.0, std::f64::consts::TAU * x.fract())
}

fn validate_nu(nu: f64) -> Result<()> {
  if !nu.is_finite() || !(0.0..1.0).contains(&nu) {
    return Err(Error::invalid("nu", format!("frequency in [0, 1) required, got {nu}")));
  }
  Ok(())
}

fn validate_t_window(t_window: i64) -> Result<()> {
  if t_window < 1 {
    return Err(Error::invalid(
      "t_window",
      format!("window half-width >= 1 required, got {t_window}"),
    ));
  }
  Ok(())
}

/// The windowed Fourier kernel at frequency `nu` with half-width `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyKernel {
  nu: f64,
  t_window: i64,
  kernel: Kernel,
}

impl FrequencyKernel {
  pub fn nu(&self) -> f64 {
    self.nu
  }

  pub fn t_window(&self) -> i64 {
    self.t_window
  }

  pub fn kernel(&self) -> &Kernel {
    &self.kernel
  }

  /// `2T + 1`, the number of window points.
  pub fn window_len(&self) -> i64 {
    2 * self.t_window + 1
  }
}

/// Builds `g_{nu,T}`: unit l2 norm, l1 norm `sqrt(2T + 1)`.
pub fn fourier_window(nu: f64, t_window: i64) -> Result<FrequencyKernel> {
  validate_nu(nu)?;
  validate_t_window(t_window)?;
  let n = 2 * t_window + 1;
  let scale = 1.0 / (n as f64).sqrt();
  let values: Vec<Complex64> = (-t_window..=t_window)
    .map(|t| phase_unit(nu * t as f64) * scale)
    .collect();
  Ok(FrequencyKernel { nu, t_window, kernel: Kernel::new(-t_window, values) })
}

/// The shift eigenvalue `z = e^{2 pi i nu}` the wave kernel approximates.
pub fn wave_eigenvalue(nu: f64) -> Complex64 {
  phase_unit(nu)
}

/// Macro-level gain at frequency `nu`:
///
/// ```text
/// transfer(nu) = beta * z / (1 - gamma * z),   z = e^{2 pi i nu}
/// ```
///
/// At `nu = 0` this is the interventional slope `beta / (1 - gamma)`; the
/// zero-frequency macro pair recovers the one-step interventional model.
pub fn transfer_coefficient(nu: f64, params: &ModelParams) -> Result<Complex64> {
  validate_nu(nu)?;
  let z = wave_eigenvalue(nu);
  Ok(params.beta() * z / (Complex64::new(1.0, 0.0) - params.gamma() * z))
}

/// Exact l1 error of the approximate eigenvector relation,
/// `|| S^j g - z^j g ||_1`. Only the `2j` boundary entries survive the
/// cancellation, each of magnitude `1 / sqrt(2T + 1)`, so for `j <= 2T + 1`
/// this equals [`shift_eigen_bound`] up to rounding.
pub fn shift_eigen_error(nu: f64, t_window: i64, j: usize) -> Result<f64> {
  let g = fourier_window(nu, t_window)?;
  let zj = phase_unit(nu * j as f64);
  Ok(g.kernel.shift(j as i64).sub(&g.kernel.scale(zj)).l1_norm())
}

/// Closed-form ceiling for [`shift_eigen_error`]: `2j / sqrt(2T + 1)`.
pub fn shift_eigen_bound(t_window: i64, j: usize) -> f64 {
  2.0 * j as f64 / ((2 * t_window + 1) as f64).sqrt()
}

/// l1 distance between the compatible partner of `g_{nu,T}` and its
/// frequency-diagonal limit, with two closed-form ceilings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatiblePartnerError {
  /// `|| f_{nu,T} - transfer(nu) * g_{nu,T} ||_1` for the truncated
  /// partner; within `2 |beta| * policy.tol` of the exact series value.
  pub actual: f64,
  /// `2 |beta| / ((1 - |gamma|)^2 sqrt(2T + 1))`, from summing the
  /// boundary-error series term by term. Attained at `nu = 0`.
  pub tight_bound: f64,
  /// `2 |beta| / (|gamma| (1 - gamma)^2 sqrt(2T + 1))`, a looser variant
  /// with a `1 / |gamma|` prefactor. Infinite at `gamma = 0`. For
  /// `0 < gamma < 1` it dominates `tight_bound`.
  pub paper_bound: f64,
}

/// Measures how far the compatible partner of the wave kernel is from
/// `transfer(nu) * g_{nu,T}`. The error decays as `1 / sqrt(T)`; both
/// reported bounds scale the same way.
///
/// At `nu = 0` the exact error attains `tight_bound` with equality (all
/// boundary terms stack with one sign), so comparisons of `actual` against
/// the bounds must leave room for the `2 |beta| * policy.tol` truncation
/// slack: the truncated series can land a hair on either side.
pub fn compatible_partner_error(
  nu: f64,
  t_window: i64,
  params: &ModelParams,
  policy: &TruncationPolicy,
) -> Result<CompatiblePartnerError> {
  let g = fourier_window(nu, t_window)?;
  let f = compatible_partner(g.kernel(), params, policy)?;
  let c = transfer_coefficient(nu, params)?;
  let actual = f.sub(&g.kernel.scale(c)).l1_norm();
  let sqrt_n = (g.window_len() as f64).sqrt();
  let b = params.beta().abs();
  let gm = params.gamma();
  let tight_bound = 2.0 * b / ((1.0 - gm.abs()).powi(2) * sqrt_n);
  let paper_bound = 2.0 * b / (gm.abs() * (1.0 - gm).powi(2) * sqrt_n);
  Ok(CompatiblePartnerError { actual, tight_bound, paper_bound })
}

/// Large-`T` per-component variance of the macro noise on the `Y` side at
/// frequency `nu`: `0.5 * |1 - gamma z|^{-2} * noise_std_y^2`. Real and
/// imaginary components each carry half the total noise power.
pub fn asymptotic_noise_variance_y(nu: f64, params: &ModelParams) -> Result<f64> {
  validate_nu(nu)?;
  let z = wave_eigenvalue(nu);
  let denom = (Complex64::new(1.0, 0.0) - params.gamma() * z).norm_sqr();
  let sy = params.noise_std_y();
  Ok(0.5 * sy * sy / denom)
}

/// The `X`-side macro noise variance at frequency `nu`: a closed form and
/// an independent finite-window evaluation that do not agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymVarX {
  /// The closed form `0.5 * |beta z / (1 - gamma z)^2|^2 * noise_std_x^2`.
  /// Notably free of `alpha`, although the noise it describes is filtered
  /// through `(I - alpha S)^{-1}`.
  pub printed: f64,
  /// `0.5 * macro_noise_variance_x(f_{nu,T})` at the reference window:
  /// the quadratic-form route, which does depend on `alpha`. Treated as
  /// ground truth by the tests.
  pub numeric: f64,
}

/// Evaluates both routes to the `X`-side macro noise variance at `nu`.
pub fn asymptotic_noise_variance_x(
  nu: f64,
  params: &ModelParams,
  t_reference: i64,
  policy: &TruncationPolicy,
) -> Result<AsymVarX> {
  let g = fourier_window(nu, t_reference)?;
  let f = compatible_partner(g.kernel(), params, policy)?;
  let numeric = 0.5 * macro_noise_variance_x(&f, params, policy)?;
  let z = wave_eigenvalue(nu);
  let one = Complex64::new(1.0, 0.0);
  let sx = params.noise_std_x();
  let printed = 0.5 * (params.beta() * z / (one - params.gamma() * z).powi(2)).norm_sqr() * sx * sx;
  Ok(AsymVarX { printed, numeric })
}

/// The relation-free second moment `E[(E^Y_{nu,T})^2]` (no conjugation):
///
/// ```text
/// <conj(h), h> * noise_std_y^2,   h = (I - gamma S)^{-1} g_{nu,T}
/// ```
///
/// At `nu = 0` this converges to `(1 - gamma)^{-2} * noise_std_y^2`; for
/// `nu` not in `{0, 1/2}` it decays to zero as the window grows, which is
/// what makes the real and imaginary noise components isotropic.
pub fn pseudo_variance_y(
  nu: f64,
  t_window: i64,
  params: &ModelParams,
  policy: &TruncationPolicy,
) -> Result<Complex64> {
  let g = fourier_window(nu, t_window)?;
  let h = geometric_inverse_apply(Complex64::new(params.gamma(), 0.0), g.kernel(), policy)?;
  let sy = params.noise_std_y();
  Ok(inner_product(&h.conj(), &h) * sy * sy)
}

/// Covariance of the `Y`-side macro noises at two frequencies under a
/// shared window: `<h_1, h_2> * noise_std_y^2`. Vanishes exactly for
/// `gamma = 0` when the frequencies are separated on the grid
/// `{k / (2T + 1)}`, and decays as `1/T` otherwise.
pub fn cross_frequency_covariance(
  nu1: f64,
  nu2: f64,
  t_window: i64,
  params: &ModelParams,
  policy: &TruncationPolicy,
) -> Result<Complex64> {
  if nu1 == nu2 {
    return Err(Error::invalid("nu2", "cross covariance needs two distinct frequencies"));
  }
  let g1 = fourier_window(nu1, t_window)?;
  let g2 = fourier_window(nu2, t_window)?;
  let rho = Complex64::new(params.gamma(), 0.0);
  let h1 = geometric_inverse_apply(rho, g1.kernel(), policy)?;
  let h2 = geometric_inverse_apply(rho, g2.kernel(), policy)?;
  let sy = params.noise_std_y();
  Ok(inner_product(&h1, &h2) * sy * sy)
}

/// Monte Carlo component statistics of the `Y`-side macro noise
/// `E^Y_{nu,T} = sum_t h(t) E_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
  pub nu: f64,
  pub t_window: i64,
  pub n: usize,
  pub mean_re: EstimateWithStderr,
  pub mean_im: EstimateWithStderr,
  pub var_re: EstimateWithStderr,
  pub var_im: EstimateWithStderr,
  pub cov_re_im: EstimateWithStderr,
}

/// Samples the macro noise at frequency `nu` directly from its kernel
/// representation (`n` independent draws, one RNG stream per draw) and
/// returns component moments. For `nu` away from `{0, 1/2}` and large `T`,
/// real and imaginary parts are isotropic: equal variances
/// [`asymptotic_noise_variance_y`], vanishing covariance.
pub fn component_statistics(
  nu: f64,
  t_window: i64,
  params: &ModelParams,
  n: usize,
  seed: u64,
  policy: &TruncationPolicy,
) -> Result<ComponentStats> {
  if n < 2 {
    return Err(Error::TooFewSamples { required: 2, actual: n });
  }
  let g = fourier_window(nu, t_window)?;
  let h = geometric_inverse_apply(Complex64::new(params.gamma(), 0.0), g.kernel(), policy)?
    .scale(Complex64::new(params.noise_std_y(), 0.0));
  let weights: Vec<Complex64> = h.iter().map(|(_, v)| v).collect();
  let mut res = Vec::with_capacity(n);
  let mut ims = Vec::with_capacity(n);
  for i in 0..n {
    let mut rng = seeded_stream(seed, i as u64);
    let mut acc = Complex64::ZERO;
    for &w in &weights {
      let e: f64 = rng.sample(StandardNormal);
      acc += w * e;
    }
    res.push(acc.re);
    ims.push(acc.im);
  }
  let pm = estimate_paired_moments(&res, &ims, 1)?;
  Ok(ComponentStats {
    nu,
    t_window,
    n,
    mean_re: EstimateWithStderr { value: pm.x.mean, stderr: pm.x.mean_stderr },
    mean_im: EstimateWithStderr { value: pm.y.mean, stderr: pm.y.mean_stderr },
    var_re: EstimateWithStderr { value: pm.x.variance, stderr: pm.x.variance_stderr },
    var_im: EstimateWithStderr { value: pm.y.variance, stderr: pm.y.variance_stderr },
    cov_re_im: EstimateWithStderr { value: pm.covariance, stderr: pm.covariance_stderr },
  })
}

/// One row of a frequency scan: everything the decoupled macro model says
/// about frequency `nu` at window half-width `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
  pub nu: f64,
  pub t_window: i64,
  pub transfer: Complex64,
  pub actual_error: f64,
  pub tight_bound: f64,
  pub paper_bound: f64,
  pub asym_var_y: f64,
  pub asym_var_x_printed: f64,
  pub asym_var_x_numeric: f64,
  pub pseudo_variance: Complex64,
}

/// Cross-frequency covariance entry of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossCovariance {
  pub nu1: f64,
  pub nu2: f64,
  pub value: Complex64,
}

/// Evaluates [`FrequencyPoint`] on the grid `nus x t_windows`.
pub fn frequency_scan(
  params: &ModelParams,
  nus: &[f64],
  t_windows: &[i64],
  policy: &TruncationPolicy,
) -> Result<Vec<FrequencyPoint>> {
  let mut out = Vec::with_capacity(nus.len() * t_windows.len());
  for &nu in nus {
    for &t in t_windows {
      let partner = compatible_partner_error(nu, t, params, policy)?;
      let asym_x = asymptotic_noise_variance_x(nu, params, t, policy)?;
      out.push(FrequencyPoint {
        nu,
        t_window: t,
        transfer: transfer_coefficient(nu, params)?,
        actual_error: partner.actual,
        tight_bound: partner.tight_bound,
        paper_bound: partner.paper_bound,
        asym_var_y: asymptotic_noise_variance_y(nu, params)?,
        asym_var_x_printed: asym_x.printed,
        asym_var_x_numeric: asym_x.numeric,
        pseudo_variance: pseudo_variance_y(nu, t, params, policy)?,
      });
    }
  }
  Ok(out)
}

/// All unordered cross-frequency covariances of a grid at one window.
pub fn cross_covariance_scan(
  params: &ModelParams,
  nus: &[f64],
  t_window: i64,
  policy: &TruncationPolicy,
) -> Result<Vec<CrossCovariance>> {
  let rho = Complex64::new(params.gamma(), 0.0);
  let sy = params.noise_std_y();
  let mut kernels = Vec::with_capacity(nus.len());
  for &nu in nus {
    let g = fourier_window(nu, t_window)?;
    kernels.push(geometric_inverse_apply(rho, g.kernel(), policy)?);
  }
  let mut out = Vec::new();
  for i in 0..nus.len() {
    for j in (i + 1)..nus.len() {
      out.push(CrossCovariance {
        nu1: nus[i],
        nu2: nus[j],
        value: inner_product(&kernels[i], &kernels[j]) * sy * sy,
      });
    }
  }
  Ok(out)
}

#[cfg(test)]
mod tests {
  use super::*;
  use crate::process::interventional_slope;

  fn params(a: f64, b: f64, g: f64) -> ModelParams {
    ModelParams::new(a, b, g).unwrap()
  }

  #[test]
  fn fourier_window_has_unit_l2_and_sqrt_n_l1() {
    for &(nu, t) in &[(0.0, 5i64), (0.1, 50), (0.25, 112), (0.73, 30)] {
      let g = fourier_window(nu, t).unwrap();
      let n = g.window_len() as f64;
      assert!((g.kernel().l2_norm() - 1.0).abs() < 1e-12);
      assert!((g.kernel().l1_norm() - n.sqrt()).abs() < 1e-9);
      assert_eq!(g.kernel().support(), Some((-t, t)));
    }
  }

  #[test]
  fn fourier_window_zero_frequency_is_constant() {
    let g = fourier_window(0.0, 3).unwrap();
    let c = Complex64::new(1.0 / (7.0f64).sqrt(), 0.0);
    for (_, v) in g.kernel().iter() {
      assert!((v - c).norm() < 1e-15);
    }
  }

  #[test]
  fn fourier_window_rejects_bad_arguments() {
    assert!(fourier_window(-0.1, 5).is_err());
    assert!(fourier_window(1.0, 5).is_err());
    assert!(fourier_window(0.25, 0).is_err());
  }

  #[test]
  fn grid_frequencies_are_orthogonal() {
    let t = 16i64;
    let n = (2 * t + 1) as f64;
    let g1 = fourier_window(1.0 / n, t).unwrap();
    let g2 = fourier_window(3.0 / n, t).unwrap();
    assert!(inner_product(g1.kernel(), g2.kernel()).norm() < 1e-12);
    assert!((inner_product(g1.kernel(), g1.kernel()).re - 1.0).abs() < 1e-12);
  }

  #[test]
  fn transfer_reference_values() {
    let p = params(0.9, 0.5, 0.5);
    let c0 = transfer_coefficient(0.0, &p).unwrap();
    assert!((c0 - Complex64::new(interventional_slope(&p), 0.0)).norm() < 1e-15);
    let c_half = transfer_coefficient(0.5, &p).unwrap();
    assert!((c_half - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-12);
    let q = params(0.9, 0.0, 0.5);
    assert_eq!(transfer_coefficient(0.3, &q).unwrap(), Complex64::ZERO);
  }

  #[test]
  fn shift_eigen_error_attains_its_bound() {
    for &(nu, t, j) in &[(0.0, 50i64, 1usize), (0.1, 50, 5), (0.25, 200, 20), (0.5, 800, 7)] {
      let err = shift_eigen_error(nu, t, j).unwrap();
      let bound = shift_eigen_bound(t, j);
      // Only boundary terms survive, so the bound is an equality here;
      // allow rounding at the 1e-12 relative level.
      assert!((err - bound).abs() <= 1e-12 * bound, "nu={nu} t={t} j={j}");
      assert!(err <= bound * (1.0 + 1e-12));
    }
  }

  #[test]
  fn shift_eigen_error_zero_at_j_zero() {
    assert_eq!(shift_eigen_error(0.25, 50, 0).unwrap(), 0.0);
  }

  #[test]
  fn partner_error_reference_bounds() {
    // beta = gamma = 0.5, T = 112: sqrt(225) = 15, so the ceilings are
    // 4/15 and 8/15.
    let p = params(0.9, 0.5, 0.5);
    let e = compatible_partner_error(0.25, 112, &p, &TruncationPolicy::default()).unwrap();
    assert!((e.tight_bound - 4.0 / 15.0).abs() < 1e-12);
    assert!((e.paper_bound - 8.0 / 15.0).abs() < 1e-12);
    assert!(e.actual <= e.tight_bound);
    assert!(e.tight_bound <= e.paper_bound);
    assert!(e.actual > 0.0);
  }

  #[test]
  fn partner_error_decays_like_inverse_sqrt_t() {
    let p = params(0.9, 0.5, 0.5);
    let policy = TruncationPolicy::default();
    let e1 = compatible_partner_error(0.1, 100, &p, &policy).unwrap().actual;
    let e4 = compatible_partner_error(0.1, 400, &p, &policy).unwrap().actual;
    let ratio = e1 / e4;
    assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
  }

  #[test]
  fn partner_error_zero_at_beta_zero() {
    let p = params(0.9, 0.0, 0.5);
    let e = compatible_partner_error(0.25, 50, &p, &TruncationPolicy::default()).unwrap();
    assert_eq!(e.actual, 0.0);
    assert_eq!(e.tight_bound, 0.0);
  }

  #[test]
  fn asym_var_y_reference_values() {
    let p = params(0.9, 0.5, 0.5);
    assert!((asymptotic_noise_variance_y(0.0, &p).unwrap() - 2.0).abs() < 1e-12);
    let q = params(0.9, 0.5, 0.0);
    assert!((asymptotic_noise_variance_y(0.3, &q).unwrap() - 0.5).abs() < 1e-12);
  }

  #[test]
  fn asym_var_y_matches_finite_window_variance() {
    let p = params(0.9, 0.5, 0.5);
    let policy = TruncationPolicy::default();
    let g = fourier_window(0.25, 800).unwrap();
    let total = crate::kernel::macro_noise_variance_y(g.kernel(), &p, &policy).unwrap();
    let asym = asymptotic_noise_variance_y(0.25, &p).unwrap();
    assert!((0.5 * total - asym).abs() < 0.05 * asym);
  }

  #[test]
  fn pseudo_variance_reference_behaviour() {
    let p = params(0.9, 0.5, 0.5);
    let policy = TruncationPolicy::default();
    // nu = 0: converges to (1 - gamma)^-2 = 4.
    let pv0 = pseudo_variance_y(0.0, 800, &p, &policy).unwrap();
    assert!((pv0.re - 4.0).abs() < 0.05 * 4.0);
    assert!(pv0.im.abs() < 1e-9);
    // nu = 0.25: decays towards zero.
    let magnitudes: Vec<f64> = [50i64, 200, 800]
      .iter()
      .map(|&t| pseudo_variance_y(0.25, t, &p, &policy).unwrap().norm())
      .collect();
    assert!(magnitudes[0] > magnitudes[1] && magnitudes[1] > magnitudes[2]);
    assert!(magnitudes[2] < 0.05);
  }

  #[test]
  fn pseudo_variance_gamma_zero_is_plain_square_sum() {
    let p = params(0.9, 0.5, 0.0);
    let policy = TruncationPolicy::default();
    let t = 40i64;
    let pv = pseudo_variance_y(0.3, t, &p, &policy).unwrap();
    let g = fourier_window(0.3, t).unwrap();
    let direct: Complex64 = g.kernel().iter().map(|(_, v)| v * v).sum();
    assert!((pv - direct).norm() < 1e-14);
  }

  #[test]
  fn cross_covariance_rejects_equal_frequencies() {
    let p = params(0.9, 0.5, 0.5);
    assert!(cross_frequency_covariance(0.25, 0.25, 50, &p, &TruncationPolicy::default()).is_err());
  }

  #[test]
  fn cross_covariance_vanishes_on_grid_at_gamma_zero() {
    let p = params(0.9, 0.5, 0.0);
    let t = 20i64;
    let n = (2 * t + 1) as f64;
    let v = cross_frequency_covariance(2.0 / n, 5.0 / n, t, &p, &TruncationPolicy::default())
      .unwrap();
    assert!(v.norm() < 1e-12);
  }

  #[test]
  fn cross_covariance_is_conjugate_symmetric() {
    let p = params(0.9, 0.5, 0.5);
    let policy = TruncationPolicy::default();
    let a = cross_frequency_covariance(0.1, 0.3, 60, &p, &policy).unwrap();
    let b = cross_frequency_covariance(0.3, 0.1, 60, &p, &policy).unwrap();
    assert!((a - b.conj()).norm() < 1e-12);
  }

  #[test]
  fn component_statistics_zero_frequency_has_no_imaginary_part() {
    let p = params(0.9, 0.5, 0.5);
    let s = component_statistics(0.0, 50, &p, 500, 3, &TruncationPolicy::default()).unwrap();
    assert_eq!(s.var_im.value, 0.0);
    assert_eq!(s.mean_im.value, 0.0);
    assert!(s.var_re.value > 0.0);
  }

  #[test]
  fn component_statistics_isotropic_at_generic_frequency() {
    let p = params(0.9, 0.5, 0.5);
    let s = component_statistics(0.25, 200, &p, 20_000, 11, &TruncationPolicy::default()).unwrap();
    let predicted = asymptotic_noise_variance_y(0.25, &p).unwrap();
    assert!((s.var_re.value - predicted).abs() <= 3.0 * s.var_re.stderr);
    assert!((s.var_im.value - predicted).abs() <= 3.0 * s.var_im.stderr);
    assert!(s.cov_re_im.value.abs() <= 3.0 * s.cov_re_im.stderr);
    assert!(s.mean_re.value.abs() <= 3.0 * s.mean_re.stderr);
  }

  #[test]
  fn component_statistics_gamma_zero_total_power_is_unit() {
    let p = params(0.9, 0.5, 0.0);
    let s = component_statistics(0.3, 100, &p, 20_000, 17, &TruncationPolicy::default()).unwrap();
    let total = s.var_re.value + s.var_im.value;
    let stderr = (s.var_re.stderr.powi(2) + s.var_im.stderr.powi(2)).sqrt();
    assert!((total - 1.0).abs() <= 3.0 * stderr);
  }

  #[test]
  fn scan_covers_grid_and_orders_bounds() {
    let p = params(0.9, 0.5, 0.5);
    let policy = TruncationPolicy::default();
    let slack = 2.0 * 0.5 * policy.tol;
    let rows = frequency_scan(&p, &[0.0, 0.25], &[50, 200], &policy).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
      assert!(r.actual_error <= r.tight_bound + slack + 1e-12 * r.tight_bound);
      assert!(r.tight_bound <= r.paper_bound);
      assert!(r.asym_var_y > 0.0);
    }
  }

  #[test]
  fn partner_error_attains_tight_bound_at_zero_frequency() {
    let p = params(0.9, 0.5, 0.5);
    let policy = TruncationPolicy::default();
    for &t in &[50i64, 200, 800] {
      let e = compatible_partner_error(0.0, t, &p, &policy).unwrap();
      let slack = 2.0 * 0.5 * policy.tol + 1e-12 * e.tight_bound;
      assert!((e.actual - e.tight_bound).abs() <= slack, "T={t}");
    }
  }
}
