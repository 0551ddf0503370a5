//! The micro-level process: a bivariate AR(1) structural causal model.
//!
//! The state `(X_t, Y_t)` evolves as
//!
//! ```text
//! X_{t+1} = alpha * X_t            + E^X_t
//! Y_{t+1} = beta  * X_t + gamma * Y_t + E^Y_t
//! ```
//!
//! with independent Gaussian noise `E^X_t ~ N(0, noise_std_x^2)` and
//! `E^Y_t ~ N(0, noise_std_y^2)`. `X` drives `Y`; nothing feeds back into
//! `X`. Stationarity requires `|alpha| < 1` and `|gamma| < 1`, which is
//! enforced at construction so the closed-form moments below are total
//! functions of a valid [`ModelParams`].

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::seeded_stream;

/// Decay threshold used when sizing default burn-in: the slowest AR mode
/// raised to the burn-in length must fall below this.
pub const BURN_IN_DECAY: f64 = 1e-9;

/// Parameters of the model. Construction validates stationarity
/// (`|alpha| < 1`, `|gamma| < 1`) and positive finite noise scales, so a
/// value of this type is always a well-posed stationary model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams", into = "RawModelParams")]
pub struct ModelParams {
  alpha: f64,
  beta: f64,
  gamma: f64,
  noise_std_x: f64,
  noise_std_y: f64,
}

/// Serde-facing mirror of [`ModelParams`]; noise scales default to 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawModelParams {
  alpha: f64,
  beta: f64,
  gamma: f64,
  #[serde(default = "one")]
  noise_std_x: f64,
  #[serde(default = "one")]
  noise_std_y: f64,
}

fn one() -> f64 {
  1.0
}

impl TryFrom<RawModelParams> for ModelParams {
  type Error = Error;

  fn try_from(raw: RawModelParams) -> Result<Self> {
    ModelParams::with_noise(raw.alpha, raw.beta, raw.gamma, raw.noise_std_x, raw.noise_std_y)
  }
}

impl From<ModelParams> for RawModelParams {
  fn from(p: ModelParams) -> Self {
    RawModelParams {
      alpha: p.alpha,
      beta: p.beta,
      gamma: p.gamma,
      noise_std_x: p.noise_std_x,
      noise_std_y: p.noise_std_y,
    }
  }
}

impl ModelParams {
  /// Model with unit noise scales.
  pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
    Self::with_noise(alpha, beta, gamma, 1.0, 1.0)
  }

  /// Model with explicit noise scales.
  pub fn with_noise(
    alpha: f64,
    beta: f64,
    gamma: f64,
    noise_std_x: f64,
    noise_std_y: f64,
  ) -> Result<Self> {
    if !alpha.is_finite() || alpha.abs() >= 1.0 {
      return Err(Error::invalid("alpha", format!("|alpha| < 1 required, got {alpha}")));
    }
    if !gamma.is_finite() || gamma.abs() >= 1.0 {
      return Err(Error::invalid("gamma", format!("|gamma| < 1 required, got {gamma}")));
    }
    if !beta.is_finite() {
      return Err(Error::invalid("beta", format!("finite value required, got {beta}")));
    }
    if !noise_std_x.is_finite() || noise_std_x <= 0.0 {
      return Err(Error::invalid(
        "noise_std_x",
        format!("positive finite value required, got {noise_std_x}"),
      ));
    }
    if !noise_std_y.is_finite() || noise_std_y <= 0.0 {
      return Err(Error::invalid(
        "noise_std_y",
        format!("positive finite value required, got {noise_std_y}"),
      ));
    }
    Ok(ModelParams {
      alpha,
      beta,
      gamma,
      noise_std_x,
      noise_std_y,
    })
  }

  pub fn alpha(&self) -> f64 {
    self.alpha
  }

  pub fn beta(&self) -> f64 {
    self.beta
  }

  pub fn gamma(&self) -> f64 {
    self.gamma
  }

  pub fn noise_std_x(&self) -> f64 {
    self.noise_std_x
  }

  pub fn noise_std_y(&self) -> f64 {
    self.noise_std_y
  }

  /// Slowest autoregressive mode, `max(|alpha|, |gamma|)`. Governs mixing
  /// time and therefore burn-in and thinning choices.
  pub fn max_ar_coefficient(&self) -> f64 {
    self.alpha.abs().max(self.gamma.abs())
  }

  /// Smallest burn-in for which the slowest mode decays below
  /// [`BURN_IN_DECAY`]: transients from the zero initial state are then
  /// negligible against any statistical tolerance used in this crate.
  pub fn default_burn_in(&self) -> usize {
    let rho = self.max_ar_coefficient();
    if rho == 0.0 {
      return 1;
    }
    let n = (BURN_IN_DECAY.ln() / rho.ln()).ceil();
    (n as usize).max(1)
  }

  /// Whether `burn_in` steps suffice to decay the slowest mode below
  /// [`BURN_IN_DECAY`].
  pub fn burn_in_is_sufficient(&self, burn_in: usize) -> bool {
    burn_in >= self.default_burn_in()
  }
}

/// First and second stationary moments of `(X_t, Y_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceSpec {
  pub mean_x: f64,
  pub mean_y: f64,
  pub c_xx: f64,
  pub c_xy: f64,
  pub c_yy: f64,
}

impl CovarianceSpec {
  /// Determinant of the 2x2 covariance matrix. Strictly positive for every
  /// valid parameter set: equality would need `Y` to be a deterministic
  /// function of `X`, which the `Y` noise rules out.
  pub fn determinant(&self) -> f64 {
    self.c_xx * self.c_yy - self.c_xy * self.c_xy
  }
}

/// A univariate Gaussian, used for interventional and conditional laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
  pub mean: f64,
  pub variance: f64,
}

/// Closed-form stationary moments.
///
/// Both means are zero. The variances come from summing the squared
/// geometric weights of past noise:
///
/// ```text
/// c_xx = sx^2 / (1 - alpha^2)
/// c_xy = sx^2 * alpha * beta / ((1 - alpha * gamma) * (1 - alpha^2))
/// c_yy = sy^2 / (1 - gamma^2)
///      + sx^2 * beta^2 * (1 + alpha * gamma)
///        / ((1 - alpha^2) * (1 - alpha * gamma) * (1 - gamma^2))
/// ```
///
/// The `c_yy` expression is the factored form; it stays finite and correct
/// as `alpha -> gamma`, where partial-fraction variants develop a spurious
/// `(alpha - gamma)^-2`.
pub fn stationary_covariance(params: &ModelParams) -> CovarianceSpec {
  let (a, b, g) = (params.alpha, params.beta, params.gamma);
  let vx = params.noise_std_x * params.noise_std_x;
  let vy = params.noise_std_y * params.noise_std_y;
  let c_xx = vx / (1.0 - a * a);
  let c_xy = vx * a * b / ((1.0 - a * g) * (1.0 - a * a));
  let c_yy = vy / (1.0 - g * g)
    + vx * b * b * (1.0 + a * g) / ((1.0 - a * a) * (1.0 - a * g) * (1.0 - g * g));
  CovarianceSpec {
    mean_x: 0.0,
    mean_y: 0.0,
    c_xx,
    c_xy,
    c_yy,
  }
}

/// Slope of the stationary regression of `Y_t` on `X_t`:
/// `a = alpha * beta / (1 - alpha * gamma) = c_xy / c_xx`. The noise scales
/// cancel in the ratio.
pub fn observational_slope(params: &ModelParams) -> f64 {
  params.alpha * params.beta / (1.0 - params.alpha * params.gamma)
}

/// Slope of the interventional mean of `Y` in the clamped value `x`:
/// `a' = beta / (1 - gamma)`. Generically different from
/// [`observational_slope`]; regression on stationary data does not recover
/// the effect of setting `X`.
pub fn interventional_slope(params: &ModelParams) -> f64 {
  params.beta / (1.0 - params.gamma)
}

/// Stationary law of `Y_t` under `do(X_t = x for all t)`:
/// `N(beta * x / (1 - gamma), sy^2 / (1 - gamma^2))`. Clamping `X` removes
/// every `X`-noise contribution, so only the geometric sum of `Y` noise
/// remains.
pub fn interventional_distribution(params: &ModelParams, x: f64) -> Result<GaussianSpec> {
  if !x.is_finite() {
    return Err(Error::invalid("x", format!("finite value required, got {x}")));
  }
  let g = params.gamma;
  let vy = params.noise_std_y * params.noise_std_y;
  Ok(GaussianSpec {
    mean: params.beta * x / (1.0 - g),
    variance: vy / (1.0 - g * g),
  })
}

/// A hard intervention on the `X` coordinate: `X_t` is clamped to the given
/// value at every step, before it feeds either equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InterventionSpec {
  /// `do(X_t = c)` for all `t`.
  Constant(f64),
  /// Time-indexed values with a default for unlisted times.
  Sequence { values: BTreeMap<i64, f64>, default: f64 },
}

impl InterventionSpec {
  pub fn value_at(&self, t: i64) -> f64 {
    match self {
      InterventionSpec::Constant(c) => *c,
      InterventionSpec::Sequence { values, default } => *values.get(&t).unwrap_or(default),
    }
  }

  pub fn validate(&self) -> Result<()> {
    let ok = match self {
      InterventionSpec::Constant(c) => c.is_finite(),
      InterventionSpec::Sequence { values, default } => {
        default.is_finite() && values.values().all(|v| v.is_finite())
      }
    };
    if ok {
      Ok(())
    } else {
      Err(Error::invalid("intervention", "all intervention values must be finite"))
    }
  }
}

/// A simulated path of the process over a contiguous window of time steps,
/// together with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
  t0: i64,
  xs: Vec<f64>,
  ys: Vec<f64>,
  seed: u64,
  stream: u64,
  burn_in: usize,
  intervention: Option<InterventionSpec>,
}

impl Trajectory {
  /// First retained time index.
  pub fn t0(&self) -> i64 {
    self.t0
  }

  pub fn xs(&self) -> &[f64] {
    &self.xs
  }

  pub fn ys(&self) -> &[f64] {
    &self.ys
  }

  pub fn len(&self) -> usize {
    self.xs.len()
  }

  pub fn is_empty(&self) -> bool {
    self.xs.is_empty()
  }

  pub fn seed(&self) -> u64 {
    self.seed
  }

  /// RNG stream index under the seed; replica draws use distinct streams.
  pub fn stream(&self) -> u64 {
    self.stream
  }

  pub fn burn_in(&self) -> usize {
    self.burn_in
  }

  pub fn intervention(&self) -> Option<&InterventionSpec> {
    self.intervention.as_ref()
  }

  /// Inclusive retained window `(first, last)`.
  pub fn window(&self) -> (i64, i64) {
    (self.t0, self.t0 + self.xs.len() as i64 - 1)
  }

  pub fn x_at(&self, t: i64) -> Option<f64> {
    self.index_of(t).map(|i| self.xs[i])
  }

  pub fn y_at(&self, t: i64) -> Option<f64> {
    self.index_of(t).map(|i| self.ys[i])
  }

  fn index_of(&self, t: i64) -> Option<usize> {
    if t < self.t0 {
      return None;
    }
    let i = (t - self.t0) as usize;
    if i < self.xs.len() {
      Some(i)
    } else {
      None
    }
  }

  /// Writes the trajectory as CSV with header `t,x,y`. Values are printed
  /// with 17 significant digits so they parse back to the same doubles.
  /// `comments` go first, one `# `-prefixed line each.
  pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> std::io::Result<()> {
    for line in comments {
      writeln!(w, "# {line}")?;
    }
    writeln!(w, "t,x,y")?;
    for (i, (x, y)) in self.xs.iter().zip(&self.ys).enumerate() {
      writeln!(w, "{},{:.16e},{:.16e}", self.t0 + i as i64, x, y)?;
    }
    Ok(())
  }
}

/// Simulates `n_steps` retained steps starting at time index 0.
///
/// The chain starts from `(0, 0)` at time `-burn_in` and the first `burn_in`
/// steps are discarded. `burn_in = None` uses [`ModelParams::default_burn_in`];
/// an explicit value that is too small for approximate stationarity is
/// accepted but reported through `log::warn!`.
///
/// Under an intervention, `X_t` is overwritten with the clamped value at
/// every time step, including the initial one, before it feeds either
/// update. The same number of noise variates is drawn either way, so an
/// observational and an intervened run with one seed share their `Y` noise
/// path exactly.
pub fn simulate(
  params: &ModelParams,
  n_steps: usize,
  burn_in: Option<usize>,
  seed: u64,
  intervention: Option<&InterventionSpec>,
) -> Result<Trajectory> {
  simulate_window(params, 0, n_steps as i64 - 1, burn_in, seed, 0, intervention)
}

/// Simulates the retained window `[t_lo, t_hi]` (inclusive). The burn-in
/// margin is prepended before `t_lo`. Macro-variable sampling uses this to
/// align trajectories with kernel supports at absolute times; replica draws
/// pass distinct `stream` indices under one seed.
pub fn simulate_window(
  params: &ModelParams,
  t_lo: i64,
  t_hi: i64,
  burn_in: Option<usize>,
  seed: u64,
  stream: u64,
  intervention: Option<&InterventionSpec>,
) -> Result<Trajectory> {
  if t_hi < t_lo {
    return Err(Error::invalid(
      "t_hi",
      format!("window [{t_lo}, {t_hi}] is empty; t_hi >= t_lo required"),
    ));
  }
  if let Some(iv) = intervention {
    iv.validate()?;
  }
  let burn_in = burn_in.unwrap_or_else(|| params.default_burn_in());
  if !params.burn_in_is_sufficient(burn_in) {
    log::warn!(
      "burn_in {} is below the default {}; retained samples may carry a transient",
      burn_in,
      params.default_burn_in()
    );
  }

  let n_retained = (t_hi - t_lo + 1) as usize;
  let mut rng = seeded_stream(seed, stream);
  let mut xs = Vec::with_capacity(n_retained);
  let mut ys = Vec::with_capacity(n_retained);

  let start = t_lo - burn_in as i64;
  let mut x = match intervention {
    Some(iv) => iv.value_at(start),
    None => 0.0,
  };
  let mut y = 0.0;
  for t in start..=t_hi {
    if t >= t_lo {
      xs.push(x);
      ys.push(y);
    }
    let ex: f64 = rng.sample(StandardNormal);
    let ey: f64 = rng.sample(StandardNormal);
    let x_next = params.alpha * x + params.noise_std_x * ex;
    let y_next = params.beta * x + params.gamma * y + params.noise_std_y * ey;
    x = match intervention {
      Some(iv) => iv.value_at(t + 1),
      None => x_next,
    };
    y = y_next;
  }

  Ok(Trajectory {
    t0: t_lo,
    xs,
    ys,
    seed,
    stream,
    burn_in,
    intervention: intervention.cloned(),
  })
}
