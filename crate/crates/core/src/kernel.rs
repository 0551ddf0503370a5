//! Finitely supported complex kernels on the integer time axis, the shift
//! operator, and truncated geometric (von Neumann) inverses.
//!
//! A kernel `k` stands for the macro-variable `Z_k = sum_t k(t) Z_t` built
//! from a micro time series `Z`. The shift acts as `(S k)(t) = k(t + 1)`,
//! so `S delta_t = delta_{t-1}`: shifting a kernel forward in the series
//! moves its support one step into the past. All operator calculus in this
//! crate reduces to sums of shifted kernels.
//!
//! `(I - rho S)^{-1}` exists for `|rho| < 1` as the geometric series
//! `sum_j rho^j S^j`, truncated here at an explicit l1 tail bound. The
//! truncation policy is part of every derived quantity's contract: results
//! are exact up to the stated tolerance, never silently degraded.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::ModelParams;

/// A complex kernel with contiguous storage starting at time `offset`.
///
/// The representation is canonical: leading and trailing entries that are
/// exactly zero are trimmed, and the all-zero kernel is stored as an empty
/// vector with offset 0. Equality of kernels is therefore plain structural
/// equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelRepr")]
pub struct Kernel {
  offset: i64,
  values: Vec<Complex64>,
}

/// Serialized form: `{ "offset": i64, "re": [...], "im": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct KernelRepr {
  offset: i64,
  re: Vec<f64>,
  im: Vec<f64>,
}

impl TryFrom<KernelRepr> for Kernel {
  type Error = Error;

  fn try_from(repr: KernelRepr) -> Result<Self> {
    if repr.re.len() != repr.im.len() {
      return Err(Error::invalid(
        "kernel",
        format!("re has {} entries but im has {}", repr.re.len(), repr.im.len()),
      ));
    }
    let values: Vec<Complex64> = repr
      .re
      .iter()
      .zip(&repr.im)
      .map(|(&re, &im)| Complex64::new(re, im))
      .collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
      return Err(Error::invalid("kernel", "all entries must be finite"));
    }
    Ok(Kernel::new(repr.offset, values))
  }
}

impl From<Kernel> for KernelRepr {
  fn from(k: Kernel) -> Self {
    KernelRepr {
      offset: k.offset,
      re: k.values.iter().map(|v| v.re).collect(),
      im: k.values.iter().map(|v| v.im).collect(),
    }
  }
}

impl Kernel {
  /// Builds a kernel from `values` placed at times `offset..`, trimming
  /// exact zeros at both ends into the canonical form.
  pub fn new(offset: i64, values: Vec<Complex64>) -> Self {
    let mut k = Kernel { offset, values };
    k.canonicalize();
    k
  }

  pub fn from_real(offset: i64, values: &[f64]) -> Self {
    Self::new(offset, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
  }

  /// The unit mass at time `t`.
  pub fn delta(t: i64) -> Self {
    Kernel {
      offset: t,
      values: vec![Complex64::new(1.0, 0.0)],
    }
  }

  pub fn zero() -> Self {
    Kernel { offset: 0, values: Vec::new() }
  }

  fn canonicalize(&mut self) {
    let is_zero = |v: &Complex64| v.re == 0.0 && v.im == 0.0;
    let lead = self.values.iter().take_while(|v| is_zero(v)).count();
    if lead == self.values.len() {
      self.offset = 0;
      self.values.clear();
      return;
    }
    let trail = self.values.iter().rev().take_while(|v| is_zero(v)).count();
    self.values.drain(self.values.len() - trail..);
    self.values.drain(..lead);
    self.offset += lead as i64;
  }

  pub fn is_zero(&self) -> bool {
    self.values.is_empty()
  }

  pub fn len(&self) -> usize {
    self.values.len()
  }

  pub fn is_empty(&self) -> bool {
    self.values.is_empty()
  }

  /// Inclusive support `(first, last)`, or `None` for the zero kernel.
  pub fn support(&self) -> Option<(i64, i64)> {
    if self.values.is_empty() {
      None
    } else {
      Some((self.offset, self.offset + self.values.len() as i64 - 1))
    }
  }

  pub fn value_at(&self, t: i64) -> Complex64 {
    if t < self.offset {
      return Complex64::ZERO;
    }
    let i = (t - self.offset) as usize;
    self.values.get(i).copied().unwrap_or(Complex64::ZERO)
  }

  /// Iterates `(t, k(t))` over the stored support.
  pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
    self
      .values
      .iter()
      .enumerate()
      .map(move |(i, &v)| (self.offset + i as i64, v))
  }

  pub fn l1_norm(&self) -> f64 {
    self.values.iter().map(|v| v.norm()).sum()
  }

  pub fn l2_norm(&self) -> f64 {
    self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
  }

  /// Plain sum of entries, `sum_t k(t)`.
  pub fn sum(&self) -> Complex64 {
    self.values.iter().sum()
  }

  /// Applies the shift `j` times: `(S^j k)(t) = k(t + j)`. The support
  /// moves to earlier times for positive `j`. Negative `j` shifts the other
  /// way. An isometry for every norm here.
  pub fn shift(&self, j: i64) -> Kernel {
    Kernel::new(self.offset - j, self.values.clone())
  }

  pub fn scale(&self, c: Complex64) -> Kernel {
    Kernel::new(self.offset, self.values.iter().map(|v| v * c).collect())
  }

  pub fn conj(&self) -> Kernel {
    Kernel::new(self.offset, self.values.iter().map(|v| v.conj()).collect())
  }

  pub fn add(&self, other: &Kernel) -> Kernel {
    self.combine(other, Complex64::new(1.0, 0.0))
  }

  pub fn sub(&self, other: &Kernel) -> Kernel {
    self.combine(other, Complex64::new(-1.0, 0.0))
  }

  fn combine(&self, other: &Kernel, scale_other: Complex64) -> Kernel {
    if self.is_zero() {
      return other.scale(scale_other);
    }
    if other.is_zero() {
      return self.clone();
    }
    let lo = self.offset.min(other.offset);
    let hi = (self.offset + self.values.len() as i64)
      .max(other.offset + other.values.len() as i64);
    let mut values = vec![Complex64::ZERO; (hi - lo) as usize];
    for (i, v) in self.values.iter().enumerate() {
      values[(self.offset - lo) as usize + i] += v;
    }
    for (i, v) in other.values.iter().enumerate() {
      values[(other.offset - lo) as usize + i] += v * scale_other;
    }
    Kernel::new(lo, values)
  }

  /// True when every entry has an exactly zero imaginary part.
  pub fn is_real(&self) -> bool {
    self.values.iter().all(|v| v.im == 0.0)
  }

  /// Writes the kernel as CSV with header `t,re,im`, entries in time order,
  /// 17 significant digits. `comments` go first as `# ` lines.
  pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> std::io::Result<()> {
    for line in comments {
      writeln!(w, "# {line}")?;
    }
    writeln!(w, "t,re,im")?;
    for (t, v) in self.iter() {
      writeln!(w, "{},{:.16e},{:.16e}", t, v.re, v.im)?;
    }
    Ok(())
  }
}

/// Truncation contract for geometric series: stop once the l1 mass of the
/// dropped tail is provably below `tol`, error out if that takes more than
/// `max_terms` terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
  pub tol: f64,
  pub max_terms: usize,
}

impl Default for TruncationPolicy {
  fn default() -> Self {
    TruncationPolicy { tol: 1e-12, max_terms: 1_000_000 }
  }
}

impl TruncationPolicy {
  pub fn validate(&self) -> Result<()> {
    if !self.tol.is_finite() || self.tol <= 0.0 {
      return Err(Error::invalid("tol", format!("positive finite value required, got {}", self.tol)));
    }
    if self.max_terms == 0 {
      return Err(Error::invalid("max_terms", "at least one term required"));
    }
    Ok(())
  }
}

fn check_contraction(rho: Complex64) -> Result<f64> {
  let r = rho.norm();
  if !r.is_finite() || r >= 1.0 {
    return Err(Error::invalid(
      "rho",
      format!("|rho| < 1 required for the geometric inverse, got |rho| = {r}"),
    ));
  }
  Ok(r)
}

/// Number of terms after which the dropped tail of `sum_j rho^j S^j k` has
/// l1 mass below `tol`: the tail after `n` terms is bounded by
/// `|rho|^n * l1(k) / (1 - |rho|)`.
fn geometric_terms(r: f64, l1: f64, policy: &TruncationPolicy) -> Result<usize> {
  let mut r_pow = 1.0;
  for n in 0..=policy.max_terms {
    if n >= 1 && r_pow * l1 / (1.0 - r) < policy.tol {
      return Ok(n);
    }
    r_pow *= r;
  }
  let required = ((policy.tol * (1.0 - r) / l1).ln() / r.ln()).ceil();
  Err(Error::TruncationBudget {
    required: if required.is_finite() && required > 0.0 {
      required as usize
    } else {
      usize::MAX
    },
    max_terms: policy.max_terms,
  })
}

/// Applies the truncated geometric inverse `(I - rho S)^{-1}` to `k`:
/// `sum_{j=0}^{J} rho^j S^j k`, with `J` chosen so the dropped tail has l1
/// mass below `policy.tol`. Requires `|rho| < 1`.
pub fn geometric_inverse_apply(
  rho: Complex64,
  k: &Kernel,
  policy: &TruncationPolicy,
) -> Result<Kernel> {
  policy.validate()?;
  let r = check_contraction(rho)?;
  if k.is_zero() {
    return Ok(Kernel::zero());
  }
  let n_terms = geometric_terms(r, k.l1_norm(), policy)?;
  let j_max = n_terms - 1;
  // S^j moves entry i of k to result index i + j_max - j (result offset is
  // k.offset - j_max).
  let mut values = vec![Complex64::ZERO; k.values.len() + j_max];
  let mut coef = Complex64::new(1.0, 0.0);
  for j in 0..=j_max {
    for (i, v) in k.values.iter().enumerate() {
      values[i + j_max - j] += coef * v;
    }
    coef *= rho;
  }
  Ok(Kernel::new(k.offset - j_max as i64, values))
}

/// The `X`-side partner of a `Y`-side kernel `g`:
///
/// ```text
/// f_g = beta * S (I - gamma S)^{-1} g
/// ```
///
/// Coarse-graining `Y` by `g` then equals coarse-graining `X` by `f_g` plus
/// an independent noise term, which is what makes `(f_g, g)` a compatible
/// pair for the macro-level model.
pub fn compatible_partner(
  g: &Kernel,
  params: &ModelParams,
  policy: &TruncationPolicy,
) -> Result<Kernel> {
  let inv = geometric_inverse_apply(Complex64::new(params.gamma(), 0.0), g, policy)?;
  Ok(inv.shift(1).scale(Complex64::new(params.beta(), 0.0)))
}

/// l2 inner product, antilinear in the first argument:
/// `<a, b> = sum_t conj(a(t)) b(t)`.
pub fn inner_product(a: &Kernel, b: &Kernel) -> Complex64 {
  let (Some((a_lo, a_hi)), Some((b_lo, b_hi))) = (a.support(), b.support()) else {
    return Complex64::ZERO;
  };
  let lo = a_lo.max(b_lo);
  let hi = a_hi.min(b_hi);
  let mut acc = Complex64::ZERO;
  let mut t = lo;
  while t <= hi {
    acc += a.value_at(t).conj() * b.value_at(t);
    t += 1;
  }
  acc
}

/// Variance of the macro noise `E^X_f = sum_t f(t) E^X-chain contributions`:
/// `<h, h> * noise_std_x^2` with `h = (I - alpha S)^{-1} f`.
pub fn macro_noise_variance_x(
  f: &Kernel,
  params: &ModelParams,
  policy: &TruncationPolicy,
) -> Result<f64> {
  let h = geometric_inverse_apply(Complex64::new(params.alpha(), 0.0), f, policy)?;
  let sx = params.noise_std_x();
  Ok(inner_product(&h, &h).re * sx * sx)
}

/// Variance of the macro noise on the `Y` side: `<h, h> * noise_std_y^2`
/// with `h = (I - gamma S)^{-1} g`. For `g = delta` this is the stationary
/// interventional variance `noise_std_y^2 / (1 - gamma^2)`.
pub fn macro_noise_variance_y(
  g: &Kernel,
  params: &ModelParams,
  policy: &TruncationPolicy,
) -> Result<f64> {
  let h = geometric_inverse_apply(Complex64::new(params.gamma(), 0.0), g, policy)?;
  let sy = params.noise_std_y();
  Ok(inner_product(&h, &h).re * sy * sy)
}

/// The same variance as [`macro_noise_variance_x`] (for `rho = alpha`,
/// `sigma = noise_std_x`) computed along an independent route: the literal
/// double sum
///
/// ```text
/// sigma^2 * sum_{k, k' >= 0} rho^{k + k'} sum_t conj(f(t + k')) f(t + k)
/// ```
///
/// truncated at a `k`-index where the geometric tail is provably below
/// `policy.tol`. Shares no code with the kernel route; exists to
/// cross-check it.
pub fn noise_variance_double_sum(
  rho: f64,
  f: &Kernel,
  sigma: f64,
  policy: &TruncationPolicy,
) -> Result<f64> {
  policy.validate()?;
  let r = check_contraction(Complex64::new(rho, 0.0))?;
  if f.is_zero() {
    return Ok(0.0);
  }
  // Tail over {k > K} u {k' > K}: each term is at most r^{k+k'} * l2(f)^2,
  // so the mass is below 2 * l2^2 * r^{K+1} / (1 - r)^2.
  let l2_sq = {
    let l2 = f.l2_norm();
    l2 * l2
  };
  let mut k_max = None;
  let mut r_pow = r;
  for k in 0..policy.max_terms {
    if 2.0 * l2_sq * r_pow / ((1.0 - r) * (1.0 - r)) < policy.tol {
      k_max = Some(k);
      break;
    }
    r_pow *= r;
  }
  let Some(k_max) = k_max else {
    return Err(Error::TruncationBudget { required: usize::MAX, max_terms: policy.max_terms });
  };

  let n = f.values.len();
  let mut powers = Vec::with_capacity(2 * k_max + 1);
  let mut p = 1.0;
  for _ in 0..=(2 * k_max) {
    powers.push(p);
    p *= rho;
  }
  let mut acc = Complex64::ZERO;
  for kp in 0..=k_max {
    for kk in 0..=k_max {
      // sum_t conj(f(t + kp)) f(t + kk) over the overlap of supports.
      let d = kp as i64 - kk as i64;
      let (lo, hi) = if d >= 0 {
        (0i64, n as i64 - 1 - d)
      } else {
        (-d, n as i64 - 1)
      };
      let mut s = Complex64::ZERO;
      let mut i = lo;
      while i <= hi {
        s += f.values[(i + d) as usize].conj() * f.values[i as usize];
        i += 1;
      }
      acc += powers[kp + kk] * s;
    }
  }
  Ok(acc.re * sigma * sigma)
}

#[cfg(test)]
mod tests {
  use super::*;

  fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
  }

  fn params(a: f64, b: f64, g: f64) -> ModelParams {
    ModelParams::new(a, b, g).unwrap()
  }

  #[test]
  fn canonical_form_trims_exact_zeros() {
    let k = Kernel::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
    assert_eq!(k.support(), Some((3, 5)));
    assert_eq!(k.len(), 3);
    assert_eq!(k.value_at(3), c(1.0, 0.0));
    assert_eq!(k.value_at(4), c(0.0, 0.0));
    assert_eq!(k.value_at(5), c(2.0, 0.0));
    let same = Kernel::new(3, vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
    assert_eq!(k, same);
  }

  #[test]
  fn zero_kernel_is_canonical() {
    let z = Kernel::new(17, vec![c(0.0, 0.0); 4]);
    assert_eq!(z, Kernel::zero());
    assert!(z.is_zero());
    assert_eq!(z.support(), None);
    assert_eq!(z.shift(5), Kernel::zero());
    assert_eq!(z.l1_norm(), 0.0);
  }

  #[test]
  fn shift_moves_delta_into_the_past() {
    assert_eq!(Kernel::delta(0).shift(1), Kernel::delta(-1));
    assert_eq!(Kernel::delta(3).shift(-2), Kernel::delta(5));
    let k = Kernel::from_real(0, &[1.0, 2.0]);
    assert_eq!(k.shift(4).support(), Some((-4, -3)));
    // (S k)(t) = k(t + 1).
    assert_eq!(k.shift(4).value_at(-4), c(1.0, 0.0));
  }

  #[test]
  fn shift_preserves_norms_exactly() {
    let k = Kernel::new(-2, vec![c(1.0, -2.0), c(0.25, 0.0), c(0.0, 3.0)]);
    for j in [-7i64, -1, 0, 1, 13] {
      assert_eq!(k.shift(j).l1_norm(), k.l1_norm());
      assert_eq!(k.shift(j).l2_norm(), k.l2_norm());
    }
    assert_eq!(k.shift(3).shift(-3), k);
  }

  #[test]
  fn inner_product_is_antilinear_in_first_argument() {
    let d = Kernel::delta(0);
    let i_d = d.scale(c(0.0, 1.0));
    assert_eq!(inner_product(&i_d, &d), c(0.0, -1.0));
    assert_eq!(inner_product(&d, &i_d), c(0.0, 1.0));
    let a = Kernel::new(0, vec![c(1.0, 2.0), c(-0.5, 0.25)]);
    let b = Kernel::new(1, vec![c(2.0, -1.0), c(0.5, 0.5)]);
    let lhs = inner_product(&a.scale(c(0.0, 2.0)), &b);
    let rhs = c(0.0, -2.0) * inner_product(&a, &b);
    assert!((lhs - rhs).norm() < 1e-15);
  }

  #[test]
  fn inner_product_respects_disjoint_supports() {
    let a = Kernel::delta(0);
    let b = Kernel::delta(1);
    assert_eq!(inner_product(&a, &b), Complex64::ZERO);
    assert_eq!(inner_product(&a, &Kernel::zero()), Complex64::ZERO);
  }

  #[test]
  fn geometric_inverse_of_delta_is_geometric_tail() {
    let policy = TruncationPolicy::default();
    let h = geometric_inverse_apply(c(0.5, 0.0), &Kernel::delta(0), &policy).unwrap();
    // Entries 0.5^j at times -j.
    assert_eq!(h.support().unwrap().1, 0);
    assert_eq!(h.value_at(0), c(1.0, 0.0));
    assert_eq!(h.value_at(-1), c(0.5, 0.0));
    assert_eq!(h.value_at(-3), c(0.125, 0.0));
    assert!((h.l1_norm() - 2.0).abs() < 2.0 * policy.tol);
    assert!(h.l1_norm() <= 2.0);
  }

  #[test]
  fn geometric_inverse_identity_at_rho_zero() {
    let k = Kernel::from_real(-3, &[1.0, -2.0, 0.5]);
    let h = geometric_inverse_apply(Complex64::ZERO, &k, &TruncationPolicy::default()).unwrap();
    assert_eq!(h, k);
  }

  #[test]
  fn geometric_inverse_rejects_expansive_rho() {
    let k = Kernel::delta(0);
    let policy = TruncationPolicy::default();
    assert!(geometric_inverse_apply(c(1.0, 0.0), &k, &policy).is_err());
    assert!(geometric_inverse_apply(c(0.8, 0.8), &k, &policy).is_err());
  }

  #[test]
  fn geometric_inverse_respects_max_terms() {
    let k = Kernel::delta(0);
    let policy = TruncationPolicy { tol: 1e-12, max_terms: 10 };
    let err = geometric_inverse_apply(c(0.9, 0.0), &k, &policy).unwrap_err();
    match err {
      Error::TruncationBudget { required, max_terms } => {
        assert_eq!(max_terms, 10);
        assert!(required > 10);
      }
      other => panic!("unexpected error {other:?}"),
    }
  }

  #[test]
  fn geometric_inverse_residual_within_tolerance() {
    // Applying (I - rho S) to the truncated inverse must reproduce the
    // input up to the dropped tail.
    let policy = TruncationPolicy::default();
    let k = Kernel::new(2, vec![c(1.0, 0.5), c(-0.75, 0.0), c(0.0, -1.25)]);
    let rho = c(0.6, -0.3);
    let h = geometric_inverse_apply(rho, &k, &policy).unwrap();
    let recovered = h.sub(&h.shift(1).scale(rho));
    assert!(recovered.sub(&k).l1_norm() < 2.0 * policy.tol);
  }

  #[test]
  fn compatible_partner_of_delta_is_shifted_geometric() {
    let policy = TruncationPolicy::default();
    let p = params(0.9, 0.5, 0.5);
    let f = compatible_partner(&Kernel::delta(0), &p, &policy).unwrap();
    // Entries beta * gamma^j at times -1 - j.
    assert_eq!(f.support().unwrap().1, -1);
    assert!((f.value_at(-1) - c(0.5, 0.0)).norm() < 1e-15);
    assert!((f.value_at(-2) - c(0.25, 0.0)).norm() < 1e-15);
    assert!((f.value_at(-4) - c(0.0625, 0.0)).norm() < 1e-15);
    // sum f = beta / (1 - gamma).
    assert!((f.sum() - c(1.0, 0.0)).norm() < 2.0 * policy.tol);
  }

  #[test]
  fn compatible_partner_is_zero_at_beta_zero() {
    let policy = TruncationPolicy::default();
    let p = params(0.9, 0.0, 0.5);
    let f = compatible_partner(&Kernel::delta(0), &p, &policy).unwrap();
    assert!(f.is_zero());
  }

  #[test]
  fn macro_noise_variance_reference_points() {
    let policy = TruncationPolicy::default();
    let d = Kernel::delta(0);
    let p0 = params(0.0, 1.0, 0.0);
    assert!((macro_noise_variance_x(&d, &p0, &policy).unwrap() - 1.0).abs() < 1e-12);
    let p = params(0.5, 1.0, 0.25);
    let vx = macro_noise_variance_x(&d, &p, &policy).unwrap();
    assert!((vx - 4.0 / 3.0).abs() < 1e-10);
    let vy = macro_noise_variance_y(&d, &p, &policy).unwrap();
    assert!((vy - 1.0 / (1.0 - 0.0625)).abs() < 1e-10);
  }

  #[test]
  fn macro_noise_variance_scales_with_sigma() {
    let policy = TruncationPolicy::default();
    let k = Kernel::from_real(0, &[1.0, -0.5, 0.25]);
    let unit = params(0.5, 1.0, 0.25);
    let scaled = ModelParams::with_noise(0.5, 1.0, 0.25, 3.0, 1.0).unwrap();
    let a = macro_noise_variance_x(&k, &unit, &policy).unwrap();
    let b = macro_noise_variance_x(&k, &scaled, &policy).unwrap();
    assert!((b - 9.0 * a).abs() < 1e-9 * b.abs());
  }

  #[test]
  fn double_sum_route_agrees_on_reference_kernel() {
    let policy = TruncationPolicy::default();
    let f = Kernel::from_real(-2, &[0.7, -1.1, 0.4, 0.9]);
    let p = params(0.8, 1.0, 0.25);
    let direct = macro_noise_variance_x(&f, &p, &policy).unwrap();
    let literal = noise_variance_double_sum(0.8, &f, 1.0, &policy).unwrap();
    assert!((direct - literal).abs() < 1e-9 * direct.abs());
  }

  #[test]
  fn double_sum_handles_zero_and_rho_zero() {
    let policy = TruncationPolicy::default();
    assert_eq!(noise_variance_double_sum(0.5, &Kernel::zero(), 1.0, &policy).unwrap(), 0.0);
    let f = Kernel::from_real(0, &[3.0, 4.0]);
    let v = noise_variance_double_sum(0.0, &f, 2.0, &policy).unwrap();
    assert!((v - 100.0).abs() < 1e-12);
  }

  #[test]
  fn kernel_json_schema_roundtrip() {
    let k = Kernel::new(-1, vec![c(1.0, 0.0), c(0.5, -0.25)]);
    let json = serde_json::to_string(&k).unwrap();
    assert_eq!(json, r#"{"offset":-1,"re":[1.0,0.5],"im":[0.0,-0.25]}"#);
    let back: Kernel = serde_json::from_str(&json).unwrap();
    assert_eq!(back, k);
    assert!(serde_json::from_str::<Kernel>(r#"{"offset":0,"re":[1.0],"im":[]}"#).is_err());
  }

  #[test]
  fn kernel_csv_lists_support_in_time_order() {
    let k = Kernel::new(2, vec![c(1.0, 0.0), c(0.0, -2.0)]);
    let mut buf = Vec::new();
    k.write_csv(&mut buf, &[]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re,im");
    assert!(lines[1].starts_with("2,1.0"));
    assert!(lines[2].starts_with("3,0.0"));
    assert_eq!(lines.len(), 3);
  }

  #[test]
  fn add_sub_align_offsets() {
    let a = Kernel::from_real(0, &[1.0, 2.0]);
    let b = Kernel::from_real(1, &[10.0]);
    let s = a.add(&b);
    assert_eq!(s.value_at(0), c(1.0, 0.0));
    assert_eq!(s.value_at(1), c(12.0, 0.0));
    assert_eq!(a.sub(&a), Kernel::zero());
  }
}
