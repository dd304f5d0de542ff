//! J lists and γ grids.

use lmg_core::SpinJ;

use crate::args::Opts;
use crate::CliError;

pub const DEFAULT_STEPS: usize = 101;

/// Range used by `gap-scan` when no γ flags are given.
pub const GAP_SCAN_DEFAULT: (f64, f64, usize) = (0.0, 3.0, 150);

/// `steps` equally spaced points of the closed interval `[min, max]`.
///
/// Each point is formed as a weighted mean of the endpoints, so both ends are
/// hit exactly and a symmetric interval yields a symmetric grid.
pub fn closed_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        n => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|k| {
                    let k = k as f64;
                    (min * (last - k) + max * k) / last
                })
                .collect()
        }
    }
}

pub fn j_values(opts: &Opts) -> Result<Vec<SpinJ>, CliError> {
    match (opts.j, opts.j_list.is_empty()) {
        (Some(_), false) => Err(CliError::usage("give either --j or --j-list, not both")),
        (Some(j), true) => Ok(vec![j]),
        (None, false) => Ok(opts.j_list.clone()),
        (None, true) => Err(CliError::usage("missing --j or --j-list")),
    }
}

/// Resolves the γ flags. `default` is the interval used when none are given;
/// without one, some γ flag is required.
pub fn gamma_values(opts: &Opts, default: Option<(f64, f64, usize)>) -> Result<Vec<f64>, CliError> {
    let ranged = opts.gamma_min.is_some() || opts.gamma_max.is_some() || opts.steps.is_some();
    let values = if !opts.gamma.is_empty() {
        if ranged {
            return Err(CliError::usage(
                "--gamma cannot be combined with --gamma-min, --gamma-max or --steps",
            ));
        }
        opts.gamma.clone()
    } else {
        let (dmin, dmax, dsteps) = match default {
            Some(d) => d,
            None if ranged => (f64::NAN, f64::NAN, DEFAULT_STEPS),
            None => {
                return Err(CliError::usage(
                    "missing --gamma or --gamma-min/--gamma-max",
                ))
            }
        };
        let min = opts.gamma_min.unwrap_or(dmin);
        let max = opts.gamma_max.unwrap_or(dmax);
        if min.is_nan() || max.is_nan() {
            return Err(CliError::usage(
                "a γ range needs both --gamma-min and --gamma-max",
            ));
        }
        let steps = opts.steps.unwrap_or(dsteps);
        if steps == 0 {
            return Err(CliError::usage("--steps must be at least 1"));
        }
        if min > max {
            return Err(CliError::usage(format!(
                "--gamma-min {min} exceeds --gamma-max {max}"
            )));
        }
        if steps == 1 && min != max {
            return Err(CliError::usage(
                "--steps 1 needs --gamma-min equal to --gamma-max",
            ));
        }
        closed_grid(min, max, steps)
    };
    if let Some(bad) = values.iter().find(|g| !g.is_finite()) {
        return Err(CliError::usage(format!("gamma must be finite, got {bad}")));
    }
    Ok(values)
}
