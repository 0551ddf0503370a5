//! Command-line runner for the bivariate AR(1) causal model: reproduces
//! every closed-form claim at desk scale with seeded Monte Carlo and writes
//! provenance-stamped CSV/JSON outputs.

mod config;
mod output;

use std::fmt::Write as _;

use argrain::kernel::Kernel;
use argrain::macro_vars::{exact_transformation_check, CheckTolerances};
use argrain::process::{
  interventional_slope, observational_slope, simulate, simulate_window, stationary_covariance,
  InterventionSpec,
};
use argrain::stats::{
  absolute_check, estimate_paired_moments, regression_slope, stderr_check, thinning_factor,
  verdict_exit_code, CheckVerdict, Status, Tolerance,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{CommonFlags, RunConfig};
use output::{render_verdicts, write_text, Meta};

#[derive(Parser)]
#[command(
  name = "argrain",
  version,
  about = "Bivariate AR(1) causal model: stationary law, interventions, \
           time coarse-graining, frequency decoupling"
)]
struct Cli {
  #[command(subcommand)]
  command: Command,
}

#[derive(Subcommand)]
enum Command {
  /// Simulate one trajectory and write it as CSV.
  Simulate {
    #[command(flatten)]
    flags: CommonFlags,
    /// Clamp X to this value at every step, do(X = x).
    #[arg(long, value_name = "X")]
    do_x: Option<f64>,
  },
  /// Compare the closed-form stationary covariance with Monte Carlo.
  Moments {
    #[command(flatten)]
    flags: CommonFlags,
  },
  /// Observational versus interventional slope, with verdicts on both
  /// closed forms and on the gap between them.
  NegativeResult {
    #[command(flatten)]
    flags: CommonFlags,
  },
  /// Commuting-diagram check for a macro kernel g (default: unit mass at
  /// time 0).
  Theorem1 {
    #[command(flatten)]
    flags: CommonFlags,
    /// Left end of g's support.
    #[arg(long, value_name = "T")]
    g_offset: Option<i64>,
    /// Comma-separated real entries of g.
    #[arg(long, value_name = "V,..", value_delimiter = ',')]
    g_values: Option<Vec<f64>>,
    /// Pair g with itself instead of its compatible partner; the
    /// interventional checks must then fail.
    #[arg(long)]
    mismatch: bool,
  },
  /// Evaluate transfer coefficient, partner error bounds, and asymptotic
  /// variances over the nu x T grid; write plot-ready CSV.
  FrequencyScan {
    #[command(flatten)]
    flags: CommonFlags,
    /// Also write the cross-frequency covariance grid to this CSV file.
    #[arg(long, value_name = "FILE")]
    cross_out: Option<std::path::PathBuf>,
  },
}

fn main() {
  env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
  let cli = match Cli::try_parse() {
    Ok(cli) => cli,
    Err(e) => {
      let code = match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
        _ => 3,
      };
      let _ = e.print();
      std::process::exit(code);
    }
  };
  let code = match run(cli) {
    Ok(code) => code,
    Err(message) => {
      eprintln!("error: {message}");
      3
    }
  };
  std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, String> {
  match cli.command {
    Command::Simulate { flags, do_x } => {
      let mut cfg = RunConfig::resolve("simulate", &flags)?;
      cfg.do_x = do_x;
      cmd_simulate(cfg, &flags)
    }
    Command::Moments { flags } => {
      let cfg = RunConfig::resolve("moments", &flags)?;
      cmd_moments(cfg, &flags)
    }
    Command::NegativeResult { flags } => {
      let cfg = RunConfig::resolve("negative-result", &flags)?;
      cmd_negative_result(cfg, &flags)
    }
    Command::Theorem1 { flags, g_offset, g_values, mismatch } => {
      let mut cfg = RunConfig::resolve("theorem1", &flags)?;
      cfg.g_offset = g_offset;
      cfg.g_values = g_values;
      cfg.mismatch = mismatch.then_some(true);
      cmd_theorem1(cfg, &flags)
    }
    Command::FrequencyScan { flags, cross_out } => {
      let mut cfg = RunConfig::resolve("frequency-scan", &flags)?;
      cfg.cross_out = cross_out.as_ref().map(|p| p.display().to_string());
      cmd_frequency_scan(cfg, &flags, cross_out.as_deref())
    }
  }
}

fn lib(e: argrain::Error) -> String {
  e.to_string()
}

fn every_kth(series: &[f64], k: usize) -> Vec<f64> {
  series.iter().copied().step_by(k.max(1)).collect()
}

fn cmd_simulate(cfg: RunConfig, flags: &CommonFlags) -> Result<i32, String> {
  let params = cfg.params().map_err(lib)?;
  let iv = cfg.do_x.map(InterventionSpec::Constant);
  let traj = simulate(&params, cfg.n, cfg.burn_in, cfg.seed, iv.as_ref()).map_err(lib)?;
  let meta = Meta::new(cfg, flags.no_timestamp);
  let mut comments = meta.comment_lines();
  comments.push(format!("burn_in_used {}", traj.burn_in()));
  let mut buf = Vec::new();
  traj.write_csv(&mut buf, &comments).map_err(|e| e.to_string())?;
  let text = String::from_utf8(buf).expect("csv is utf-8");
  write_text(flags.out.as_deref(), &text).map_err(|e| e.to_string())?;
  Ok(0)
}

fn cmd_moments(cfg: RunConfig, flags: &CommonFlags) -> Result<i32, String> {
  let params = cfg.params().map_err(lib)?;
  let k = thinning_factor(&params);
  let raw = cfg.n.max(2) * k;
  let traj = simulate(&params, raw, cfg.burn_in, cfg.seed, None).map_err(lib)?;
  let pm = estimate_paired_moments(traj.xs(), traj.ys(), k).map_err(lib)?;
  let closed = stationary_covariance(&params);
  let checks = vec![
    stderr_check("x_mean_is_zero", pm.x.mean, 0.0, pm.x.mean_stderr, 3.0),
    stderr_check("y_mean_is_zero", pm.y.mean, 0.0, pm.y.mean_stderr, 3.0),
    stderr_check("c_xx", pm.x.variance, closed.c_xx, pm.x.variance_stderr, 3.0),
    stderr_check("c_xy", pm.covariance, closed.c_xy, pm.covariance_stderr, 3.0),
    stderr_check("c_yy", pm.y.variance, closed.c_yy, pm.y.variance_stderr, 3.0),
  ];

  let mut text = String::new();
  let _ = writeln!(text, "stationary covariance, closed form vs {} effective samples", pm.n_effective);
  let _ = writeln!(text, "  c_xx  {:>13.6e}  estimated {:>13.6e} +- {:.3e}", closed.c_xx, pm.x.variance, pm.x.variance_stderr);
  let _ = writeln!(text, "  c_xy  {:>13.6e}  estimated {:>13.6e} +- {:.3e}", closed.c_xy, pm.covariance, pm.covariance_stderr);
  let _ = writeln!(text, "  c_yy  {:>13.6e}  estimated {:>13.6e} +- {:.3e}", closed.c_yy, pm.y.variance, pm.y.variance_stderr);
  text.push_str(&render_verdicts(&checks));
  print!("{text}");

  let code = verdict_exit_code(&checks);
  if flags.out.is_some() {
    let meta = Meta::new(cfg, flags.no_timestamp);
    let report = meta.json_report(json!({
      "closed_form": closed,
      "estimates": pm,
      "thinning": k,
      "checks": checks,
    }));
    write_text(flags.out.as_deref(), &report).map_err(|e| e.to_string())?;
  }
  Ok(code)
}

fn cmd_negative_result(cfg: RunConfig, flags: &CommonFlags) -> Result<i32, String> {
  let params = cfg.params().map_err(lib)?;
  let a = observational_slope(&params);
  let a_prime = interventional_slope(&params);
  let k = thinning_factor(&params);

  let traj = simulate(&params, cfg.n.max(10) * k, cfg.burn_in, cfg.seed, None).map_err(lib)?;
  let obs = regression_slope(&every_kth(traj.xs(), k), &every_kth(traj.ys(), k)).map_err(lib)?;

  let levels = [-2.0, -1.0, 0.0, 1.0, 2.0];
  let per_level = (cfg.n / levels.len()).max(10);
  let mut int_xs = Vec::with_capacity(levels.len() * per_level);
  let mut int_ys = Vec::with_capacity(levels.len() * per_level);
  for (i, &x) in levels.iter().enumerate() {
    let iv = InterventionSpec::Constant(x);
    let t_hi = (per_level * k) as i64 - 1;
    let traj =
      simulate_window(&params, 0, t_hi, cfg.burn_in, cfg.seed, i as u64 + 1, Some(&iv))
        .map_err(lib)?;
    for y in every_kth(traj.ys(), k) {
      int_xs.push(x);
      int_ys.push(y);
    }
  }
  let int_fit = regression_slope(&int_xs, &int_ys).map_err(lib)?;

  let gap = (int_fit.slope - obs.slope).abs();
  let gap_stderr = obs.slope_stderr.hypot(int_fit.slope_stderr);
  let gap_status = if gap - 3.0 * gap_stderr > 0.1 {
    Status::Pass
  } else if gap + 3.0 * gap_stderr <= 0.1 {
    Status::Fail
  } else {
    Status::Inconclusive
  };
  let checks = vec![
    absolute_check("observational_slope_matches_closed_form", obs.slope, a, 0.02, obs.slope_stderr, 3.0),
    absolute_check("interventional_slope_matches_closed_form", int_fit.slope, a_prime, 0.02, int_fit.slope_stderr, 3.0),
    CheckVerdict {
      name: "slopes_differ_beyond_threshold".to_string(),
      observed: gap,
      expected: 0.1,
      tolerance: Tolerance::StderrUnits { k_sigma: 3.0, stderr: gap_stderr },
      status: gap_status,
    },
  ];

  let mut text = String::new();
  let _ = writeln!(text, "closed-form observational slope a   {a:.6}");
  let _ = writeln!(text, "closed-form interventional slope a' {a_prime:.6}");
  let _ = writeln!(text, "empirical observational slope  {:.6} +- {:.3e}", obs.slope, obs.slope_stderr);
  let _ = writeln!(text, "empirical interventional slope {:.6} +- {:.3e}", int_fit.slope, int_fit.slope_stderr);
  let _ = writeln!(text, "slope gap {gap:.6}");
  text.push_str(&render_verdicts(&checks));
  print!("{text}");

  let code = verdict_exit_code(&checks);
  if flags.out.is_some() {
    let meta = Meta::new(cfg, flags.no_timestamp);
    let report = meta.json_report(json!({
      "a": a,
      "a_prime": a_prime,
      "observational": obs,
      "interventional": int_fit,
      "gap": gap,
      "checks": checks,
    }));
    write_text(flags.out.as_deref(), &report).map_err(|e| e.to_string())?;
  }
  Ok(code)
}

fn cmd_theorem1(cfg: RunConfig, flags: &CommonFlags) -> Result<i32, String> {
  let params = cfg.params().map_err(lib)?;
  let offset = cfg.g_offset.unwrap_or(0);
  let g = match &cfg.g_values {
    Some(values) => Kernel::from_real(offset, values),
    None => Kernel::delta(offset),
  };
  let f_override = if cfg.mismatch == Some(true) { Some(g.clone()) } else { None };
  let report = exact_transformation_check(
    &params,
    &g,
    f_override.as_ref(),
    cfg.n,
    cfg.seed,
    &CheckTolerances::default(),
    &cfg.policy(),
  )
  .map_err(lib)?;

  let mut text = String::new();
  let _ = writeln!(text, "draws per batch {}", report.n_draws);
  let _ = writeln!(
    text,
    "intervention micro value {:.6} realizing macro x* {:.6}",
    report.intervention_value, report.x_macro_intervened
  );
  let _ = writeln!(text, "slope {:.6} +- {:.3e}", report.slope.value, report.slope.stderr);
  let _ = writeln!(
    text,
    "residual variance {:.6} +- {:.3e} (predicted {:.6})",
    report.residual_variance.value, report.residual_variance.stderr,
    report.predicted_residual_variance
  );
  let _ = writeln!(
    text,
    "interventional mean {:.6} +- {:.3e} (conditional predicts {:.6} +- {:.3e})",
    report.interventional_mean.value, report.interventional_mean.stderr,
    report.predicted_interventional_mean.value, report.predicted_interventional_mean.stderr
  );
  let _ = writeln!(
    text,
    "interventional variance {:.6} +- {:.3e}",
    report.interventional_variance.value, report.interventional_variance.stderr
  );
  text.push_str(&render_verdicts(&report.checks));
  print!("{text}");

  let code = verdict_exit_code(&report.checks);
  if flags.out.is_some() {
    let meta = Meta::new(cfg, flags.no_timestamp);
    let doc = meta.json_report(serde_json::to_value(&report).expect("report serializes"));
    write_text(flags.out.as_deref(), &doc).map_err(|e| e.to_string())?;
  }
  Ok(code)
}

fn cmd_frequency_scan(
  cfg: RunConfig,
  flags: &CommonFlags,
  cross_out: Option<&std::path::Path>,
) -> Result<i32, String> {
  let params = cfg.params().map_err(lib)?;
  let policy = cfg.policy();
  let points =
    argrain::frequency::frequency_scan(&params, &cfg.nu_grid, &cfg.t_windows, &policy)
      .map_err(lib)?;

  let meta = Meta::new(cfg.clone(), flags.no_timestamp);
  let mut text = String::new();
  for line in meta.comment_lines() {
    let _ = writeln!(text, "# {line}");
  }
  let _ = writeln!(
    text,
    "nu,T,transfer_re,transfer_im,actual_error,tight_bound,paper_bound,asym_var_y,\
     asym_var_x_printed,asym_var_x_numeric,pseudo_var_abs"
  );
  for p in &points {
    let _ = writeln!(
      text,
      "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
      p.nu,
      p.t_window,
      p.transfer.re,
      p.transfer.im,
      p.actual_error,
      p.tight_bound,
      p.paper_bound,
      p.asym_var_y,
      p.asym_var_x_printed,
      p.asym_var_x_numeric,
      p.pseudo_variance.norm()
    );
  }
  write_text(flags.out.as_deref(), &text).map_err(|e| e.to_string())?;

  if let Some(path) = cross_out {
    let mut cross_text = String::new();
    for line in meta.comment_lines() {
      let _ = writeln!(cross_text, "# {line}");
    }
    let _ = writeln!(cross_text, "nu1,nu2,T,cov_re,cov_im,cov_abs");
    for &t in &cfg.t_windows {
      let rows = argrain::frequency::cross_covariance_scan(&params, &cfg.nu_grid, t, &policy)
        .map_err(lib)?;
      for c in rows {
        let _ = writeln!(
          cross_text,
          "{},{},{},{:.16e},{:.16e},{:.16e}",
          c.nu1,
          c.nu2,
          t,
          c.value.re,
          c.value.im,
          c.value.norm()
        );
      }
    }
    write_text(Some(path), &cross_text).map_err(|e| e.to_string())?;
  }
  Ok(0)
}
