use std::time::Instant;

use lmg_core::{
    build_lmg_general, build_nonhermitian, build_supercharges, build_susy_rotated,
    classify_spectrum, determinant_factorization, eig_dense_symmetric, extract_hn_blocks,
    gap_bound, ground_state_in, params_from_chi, sorted_hamiltonian, spectral_gap, susy_spectrum,
    tridiag_gap_working_set, verify_superalgebra, Frame, GapMethod, GapResult, ModelParams,
    SpectrumReport, SpinJ, Verdict, DEFAULT_PAIRING_TOL, DENSE_SPECTRUM_LIMIT,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Cli, Command, FormatArg, FrameArg, ModelArg, Opts};
use crate::grid::{gamma_values, j_values, GAP_SCAN_DEFAULT};
use crate::output::{emit, float, json_float, spin, Cell, Report, Table};
use crate::{plot, thread_count, CliError, THREADS_ENV};

/// Largest J for the characteristic-polynomial identity.
const FACTORIZATION_J_LIMIT: u32 = 12;
/// Largest J whose level pattern is checked by dense diagonalization.
const DENSE_PATTERN_J_LIMIT: u32 = 40;
const FACTORIZATION_TOL: f64 = 1e-8;
const GROUND_RESIDUAL_TOL: f64 = 1e-9;
const NORM_RATIO_TOL: f64 = 1e-10;

type CellResult<T> = Result<T, CliError>;

struct Outcome {
    report: Report,
    /// `Err` when the data was produced but a check did not pass.
    status: Result<(), CliError>,
    plot: Option<String>,
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let opts = cli.command.opts();
    validate_common(&cli.command, opts)?;
    let env = std::env::var(THREADS_ENV).ok();
    let threads = thread_count(opts.threads, env.as_deref())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {threads} worker threads: {e}")))?;

    let outcome = pool.install(|| match &cli.command {
        Command::Spectrum(o) => spectrum(o),
        Command::GapScan(o) => gap_scan(o),
        Command::SusyCheck(o) => susy_check(o),
        Command::GroundState(o) => ground_state(o),
        Command::Bench(o) => bench(o),
    })?;

    emit(opts.out.as_deref(), &outcome.report.render(opts.format))?;
    if let (Some(path), Some(script)) = (&opts.emit_plot, &outcome.plot) {
        std::fs::write(path, script)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    outcome.status
}

fn validate_common(cmd: &Command, opts: &Opts) -> Result<(), CliError> {
    if let Some(tol) = opts.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::usage(format!(
                "--tol must be positive and finite, got {tol}"
            )));
        }
    }
    let has_params = [opts.xi, opts.chi1, opts.chi2, opts.lambda]
        .iter()
        .any(Option::is_some);
    match opts.model {
        ModelArg::Susy if has_params => {
            return Err(CliError::usage(
                "--xi, --chi1, --chi2 and --lambda need --model general",
            ));
        }
        ModelArg::General if !matches!(cmd, Command::Spectrum(_)) => {
            return Err(CliError::usage(format!(
                "{} supports only --model susy",
                cmd.name()
            )));
        }
        _ => {}
    }
    if opts.frame.is_some() && !matches!(cmd, Command::GroundState(_)) {
        return Err(CliError::usage("--frame applies only to ground-state"));
    }
    if opts.emit_plot.is_some() {
        if !matches!(
            cmd,
            Command::Spectrum(_) | Command::GapScan(_) | Command::GroundState(_)
        ) {
            return Err(CliError::usage(format!(
                "--emit-plot is not available for {}",
                cmd.name()
            )));
        }
        if opts.format != FormatArg::Csv {
            return Err(CliError::usage(
                "--emit-plot plots CSV output; use --format csv",
            ));
        }
        if opts.out.is_none() {
            return Err(CliError::usage(
                "--emit-plot needs --out for the script to read",
            ));
        }
    }
    Ok(())
}

fn config(command: &str, opts: &Opts, js: &[SpinJ], gammas: &[f64]) -> Value {
    let model = match opts.model {
        ModelArg::Susy => json!("susy"),
        ModelArg::General => json!({
            "general": {
                "xi": opts.xi.map(json_float),
                "chi1": opts.chi1.map(json_float),
                "chi2": opts.chi2.map(json_float),
                "lambda": opts.lambda.map(json_float),
            }
        }),
    };
    json!({
        "command": command,
        "j_list": js.iter().map(|j| json_float(j.j())).collect::<Vec<_>>(),
        "gamma": gammas.iter().map(|&g| json_float(g)).collect::<Vec<_>>(),
        "model": model,
        "tol": json_float(opts.tol.unwrap_or(DEFAULT_PAIRING_TOL)),
    })
}

fn grid_cells(js: &[SpinJ], gammas: &[f64]) -> Vec<(SpinJ, f64)> {
    js.iter()
        .flat_map(|&j| gammas.iter().map(move |&g| (j, g)))
        .collect()
}

fn dense_allowed(j: SpinJ) -> Result<(), CliError> {
    if j.dim() > DENSE_SPECTRUM_LIMIT {
        return Err(CliError::usage(format!(
            "J = {} needs the dense solver, limited to dimension {DENSE_SPECTRUM_LIMIT}",
            spin(j)
        )));
    }
    Ok(())
}

fn spectrum(opts: &Opts) -> Result<Outcome, CliError> {
    let js = j_values(opts)?;
    match opts.model {
        ModelArg::Susy => spectrum_susy(opts, &js),
        ModelArg::General => spectrum_general(opts, &js),
    }
}

fn spectrum_susy(opts: &Opts, js: &[SpinJ]) -> Result<Outcome, CliError> {
    let gammas = gamma_values(opts, None)?;
    for &j in js {
        if !(j.is_integer() && j.two_j() > 0) {
            dense_allowed(j)?;
        }
    }
    let tol = opts.tol.unwrap_or(DEFAULT_PAIRING_TOL);
    let cells = grid_cells(js, &gammas);
    let reports: Vec<CellResult<SpectrumReport>> = cells
        .par_iter()
        .map(|&(j, g)| Ok(classify_spectrum(&susy_spectrum(j, g)?, j, tol)?))
        .collect();

    let mut table = Table::new(&[
        "j",
        "gamma",
        "level_index",
        "eigenvalue",
        "pair_id",
        "is_zero_mode",
    ]);
    let (mut pattern, mut broken) = (0, 0);
    for (&(j, g), report) in cells.iter().zip(reports) {
        let report = report?;
        match report.verdict {
            Verdict::SusyPattern => pattern += 1,
            Verdict::SusyBroken => broken += 1,
        }
        let ids = report.pair_ids();
        let zero = report.zero_mode_index();
        for (k, &e) in report.eigenvalues.iter().enumerate() {
            table.push(vec![
                Cell::Spin(j),
                Cell::Float(g),
                Cell::Int(k as i64),
                Cell::Float(e),
                ids[k].map_or(Cell::Empty, |d| Cell::Int(d as i64)),
                Cell::Bool(zero == Some(k)),
            ]);
        }
    }
    let summary = json!({
        "cells": cells.len(),
        "rows": table.rows.len(),
        "susy_pattern": pattern,
        "susy_broken": broken,
    });
    let plot = opts.out.as_deref().map(|p| plot::spectrum_script(p, js));
    Ok(Outcome {
        report: Report {
            config: config("spectrum", opts, js, &gammas),
            table,
            summary,
        },
        status: Ok(()),
        plot,
    })
}

fn spectrum_general(opts: &Opts, js: &[SpinJ]) -> Result<Outcome, CliError> {
    let (Some(xi), Some(chi1), Some(chi2), Some(lambda)) =
        (opts.xi, opts.chi1, opts.chi2, opts.lambda)
    else {
        return Err(CliError::usage(
            "--model general needs --xi, --chi1, --chi2 and --lambda",
        ));
    };
    let params = ModelParams::new(xi, chi1, chi2, lambda)?;
    if !opts.gamma.is_empty()
        || opts.gamma_min.is_some()
        || opts.gamma_max.is_some()
        || opts.steps.is_some()
    {
        eprintln!(
            "lmg: note: --model general takes gamma from atanh(chi2/chi1); gamma flags are ignored"
        );
    }
    // χ₂ = χ₁ has no finite γ; the column is left empty.
    let gamma = params_from_chi(chi1, chi2).ok().map(|(_, g)| g);
    for &j in js {
        dense_allowed(j)?;
    }
    let levels: Vec<CellResult<Vec<f64>>> = js
        .par_iter()
        .map(|&j| Ok(eig_dense_symmetric(&build_lmg_general(j, &params))?))
        .collect();

    let mut table = Table::new(&[
        "j",
        "gamma",
        "level_index",
        "eigenvalue",
        "pair_id",
        "is_zero_mode",
    ]);
    for (&j, levels) in js.iter().zip(levels) {
        for (k, e) in levels?.into_iter().enumerate() {
            table.push(vec![
                Cell::Spin(j),
                gamma.map_or(Cell::Empty, Cell::Float),
                Cell::Int(k as i64),
                Cell::Float(e),
                Cell::Empty,
                Cell::Empty,
            ]);
        }
    }
    let gammas: Vec<f64> = gamma.into_iter().collect();
    let summary = json!({ "cells": js.len(), "rows": table.rows.len(), "susy_point": params.is_susy_point() });
    let plot = opts.out.as_deref().map(|p| plot::spectrum_script(p, js));
    Ok(Outcome {
        report: Report {
            config: config("spectrum", opts, js, &gammas),
            table,
            summary,
        },
        status: Ok(()),
        plot,
    })
}

fn gap_scan(opts: &Opts) -> Result<Outcome, CliError> {
    let js = j_values(opts)?;
    let gammas = gamma_values(opts, Some(GAP_SCAN_DEFAULT))?;
    let cells = grid_cells(&js, &gammas);
    let start = Instant::now();
    let results: Vec<CellResult<GapResult>> = cells
        .par_iter()
        .map(|&(j, g)| Ok(spectral_gap(j, g, GapMethod::TridiagOdd)?))
        .collect();
    let elapsed = start.elapsed();

    let mut table = Table::new(&["j", "gamma", "gap", "bound", "satisfied"]);
    let (mut ok, mut unsatisfied, mut errors) = (0usize, 0usize, 0usize);
    let mut min_excess = f64::INFINITY;
    let mut first_unsatisfied = None;
    let mut first_error: Option<String> = None;
    for (&(j, g), r) in cells.iter().zip(results) {
        match r {
            Ok(r) => {
                if r.satisfied {
                    ok += 1;
                } else {
                    unsatisfied += 1;
                    first_unsatisfied.get_or_insert((j, g, r.gap, r.bound));
                }
                min_excess = min_excess.min(r.gap - r.bound);
                table.push(vec![
                    Cell::Spin(j),
                    Cell::Float(g),
                    Cell::Float(r.gap),
                    Cell::Float(r.bound),
                    Cell::Bool(r.satisfied),
                ]);
            }
            Err(e) => {
                errors += 1;
                let msg = match e {
                    CliError::Usage(m) | CliError::Failure(m) => m,
                };
                if first_error.is_none() {
                    eprintln!("lmg: row J = {}: {msg}", spin(j));
                }
                first_error.get_or_insert(msg);
                table.push(vec![
                    Cell::Spin(j),
                    Cell::Float(g),
                    Cell::Empty,
                    Cell::Float(gap_bound(g, 1.0)),
                    Cell::Text("error".into()),
                ]);
            }
        }
    }
    eprintln!(
        "lmg: gap-scan: {} rows in {:.3} s",
        cells.len(),
        elapsed.as_secs_f64()
    );

    let summary = json!({
        "rows": cells.len(),
        "satisfied": ok,
        "unsatisfied": unsatisfied,
        "errors": errors,
        "min_gap_minus_bound": (ok + unsatisfied > 0).then(|| json_float(min_excess)),
    });
    let status = if errors == cells.len() {
        Err(CliError::usage(format!(
            "every row failed: {}",
            first_error.unwrap_or_default()
        )))
    } else if let Some((j, g, gap, bound)) = first_unsatisfied {
        Err(CliError::failure(format!(
            "gap bound violated in {unsatisfied} rows, first at J = {}, gamma = {}: gap {} < bound {}",
            spin(j),
            float(g),
            float(gap),
            float(bound)
        )))
    } else {
        Ok(())
    };
    let plot = opts.out.as_deref().map(|p| plot::gap_script(p, &js));
    Ok(Outcome {
        report: Report {
            config: config("gap-scan", opts, &js, &gammas),
            table,
            summary,
        },
        status,
        plot,
    })
}

struct SusyCell {
    residuals: Option<[f64; 5]>,
    factorization_residual: Option<f64>,
    mirror_exact: Option<bool>,
    verdict: Verdict,
    smallest: f64,
    broken: bool,
    failure: Option<String>,
}

fn susy_cell(j: SpinJ, gamma: f64, tol: f64) -> CellResult<SusyCell> {
    if !j.is_integer() {
        // No zero mode exists; a broken verdict is the expected result.
        let report =
            classify_spectrum(&eig_dense_symmetric(&build_susy_rotated(j, gamma))?, j, tol)?;
        return Ok(SusyCell {
            residuals: None,
            factorization_residual: None,
            mirror_exact: None,
            verdict: report.verdict,
            smallest: report.eigenvalues[0],
            broken: true,
            failure: None,
        });
    }
    let jj = j.integer_j()?;
    let charges = build_supercharges(j, gamma)?;
    let (h, _) = sorted_hamiltonian(j, gamma);
    let r = verify_superalgebra(&charges, &h)?;

    let (factorization_residual, mirror_exact, factorization_ok) = if jj <= FACTORIZATION_J_LIMIT {
        let f = determinant_factorization(j, gamma)?;
        (
            Some(f.coefficient_residual),
            f.mirror_exact,
            f.coefficient_residual <= FACTORIZATION_TOL,
        )
    } else {
        let blocks = extract_hn_blocks(&build_nonhermitian(j, gamma), j)?;
        (None, blocks.h_plus.reversed() == blocks.h_minus, true)
    };

    let levels = if jj <= DENSE_PATTERN_J_LIMIT {
        eig_dense_symmetric(&build_susy_rotated(j, gamma))?
    } else {
        susy_spectrum(j, gamma)?
    };
    let report = classify_spectrum(&levels, j, tol)?;

    let failure = if !r.passes() {
        Some(format!(
            "superalgebra residual {} exceeds {}",
            float(r.max()),
            float(r.threshold())
        ))
    } else if !factorization_ok {
        Some(format!(
            "determinant factorization residual {} exceeds {}",
            float(factorization_residual.unwrap_or(f64::NAN)),
            float(FACTORIZATION_TOL)
        ))
    } else if !mirror_exact {
        Some("H+ is not the reversal of H-".to_string())
    } else if report.verdict != Verdict::SusyPattern {
        Some(format!(
            "spectrum is not one zero mode plus doublets ({} unpaired levels)",
            report.unpaired.len() + usize::from(report.zero_mode.is_none())
        ))
    } else {
        None
    };
    Ok(SusyCell {
        residuals: Some([
            r.q1_square,
            r.q2_square,
            r.anticommutator,
            r.commutator,
            r.h_norm,
        ]),
        factorization_residual,
        mirror_exact: Some(mirror_exact),
        verdict: report.verdict,
        smallest: report.eigenvalues[0],
        broken: report.verdict == Verdict::SusyBroken,
        failure,
    })
}

fn susy_check(opts: &Opts) -> Result<Outcome, CliError> {
    let js = j_values(opts)?;
    let gammas = gamma_values(opts, None)?;
    for &j in &js {
        if j.two_j() == 0 {
            return Err(CliError::usage("J = 0 has no supercharges"));
        }
        if !j.is_integer() {
            dense_allowed(j)?;
        }
    }
    let tol = opts.tol.unwrap_or(DEFAULT_PAIRING_TOL);
    let cells = grid_cells(&js, &gammas);
    let results: Vec<CellResult<SusyCell>> = cells
        .par_iter()
        .map(|&(j, g)| susy_cell(j, g, tol))
        .collect();

    let mut table = Table::new(&[
        "j",
        "gamma",
        "q1_square",
        "q2_square",
        "anticommutator",
        "commutator",
        "h_norm",
        "factorization_residual",
        "mirror_exact",
        "verdict",
        "smallest_eigenvalue",
        "broken",
        "passed",
    ]);
    let mut failures = 0usize;
    let mut first_failure = None;
    let mut broken = 0usize;
    for (&(j, g), cell) in cells.iter().zip(results) {
        let c = cell?;
        let opt_float = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Float);
        let mut row = vec![Cell::Spin(j), Cell::Float(g)];
        match c.residuals {
            Some(rs) => row.extend(rs.iter().map(|&x| Cell::Float(x))),
            None => row.extend(std::iter::repeat_n(Cell::Empty, 5)),
        }
        row.push(opt_float(c.factorization_residual));
        row.push(c.mirror_exact.map_or(Cell::Empty, Cell::Bool));
        row.push(Cell::Text(format!("{:?}", c.verdict)));
        row.push(Cell::Float(c.smallest));
        row.push(Cell::Bool(c.broken));
        row.push(Cell::Bool(c.failure.is_none()));
        table.push(row);
        if c.broken {
            broken += 1;
        }
        if let Some(msg) = c.failure {
            failures += 1;
            first_failure.get_or_insert(format!("J = {}, gamma = {}: {msg}", spin(j), float(g)));
        }
    }
    let summary = json!({
        "cells": cells.len(),
        "passed": cells.len() - failures,
        "failed": failures,
        "broken": broken,
    });
    let status = match first_failure {
        Some(msg) => Err(CliError::failure(msg)),
        None => Ok(()),
    };
    Ok(Outcome {
        report: Report {
            config: config("susy-check", opts, &js, &gammas),
            table,
            summary,
        },
        status,
        plot: None,
    })
}

fn ground_state(opts: &Opts) -> Result<Outcome, CliError> {
    let js = j_values(opts)?;
    let gammas = gamma_values(opts, None)?;
    let (&[j], &[gamma]) = (js.as_slice(), gammas.as_slice()) else {
        return Err(CliError::usage(
            "ground-state takes a single J and a single gamma",
        ));
    };
    let frame = match opts.frame {
        None | Some(FrameArg::Factorized) => Frame::Factorized,
        Some(FrameArg::Rotated) => Frame::Rotated,
    };
    let gs = ground_state_in(j, gamma, frame)?;

    let mut table = Table::new(&["m", "amplitude"]);
    let jj = j.integer_j()? as i64;
    for (i, &a) in gs.amplitudes.iter().enumerate() {
        table.push(vec![Cell::Int(i as i64 - jj), Cell::Float(a)]);
    }
    let residual_limit = GROUND_RESIDUAL_TOL * gs.h_norm.max(1.0);
    let summary = json!({
        "j": json_float(j.j()),
        "gamma": json_float(gamma),
        "frame": format!("{:?}", gs.frame),
        "amplitudes": gs.amplitudes.iter().map(|&a| json_float(a)).collect::<Vec<_>>(),
        "norms": {
            "direct": json_float(gs.norm_direct),
            "legendre": json_float(gs.norm_legendre),
            "ratio": json_float(gs.norm_ratio()),
            "log_ratio": json_float(gs.log_norm_ratio),
        },
        "residual": {
            "energy": json_float(gs.energy_residual),
            "h_norm": json_float(gs.h_norm),
            "limit": json_float(residual_limit),
        },
    });
    if opts.format == FormatArg::Csv {
        eprintln!(
            "{summary_line}",
            summary_line = json!({ "norms": summary["norms"], "residual": summary["residual"] })
        );
    }
    let status = if !(gs.energy_residual <= residual_limit) {
        Err(CliError::failure(format!(
            "energy residual {} exceeds {}",
            float(gs.energy_residual),
            float(residual_limit)
        )))
    } else if !(gs.log_norm_ratio.abs() <= NORM_RATIO_TOL) {
        Err(CliError::failure(format!(
            "direct and Legendre norms differ: ratio {}",
            float(gs.norm_ratio())
        )))
    } else {
        Ok(())
    };
    let plot = opts
        .out
        .as_deref()
        .map(|p| plot::ground_state_script(p, j, gamma));
    Ok(Outcome {
        report: Report {
            config: config("ground-state", opts, &js, &gammas),
            table,
            summary,
        },
        status,
        plot,
    })
}

/// Sequential on purpose: each timing is a single-threaded gap computation.
fn bench(opts: &Opts) -> Result<Outcome, CliError> {
    let js = j_values(opts)?;
    let gammas = gamma_values(opts, None)?;
    for &j in &js {
        let jj = j.integer_j()?;
        if jj == 0 {
            return Err(CliError::usage("J = 0 has no excited states"));
        }
    }
    let mut table = Table::new(&[
        "j",
        "gamma",
        "gap",
        "bound",
        "satisfied",
        "working_set_bytes",
    ]);
    let mut timings = Vec::new();
    let mut first_unsatisfied = None;
    for (j, g) in grid_cells(&js, &gammas) {
        let start = Instant::now();
        let r = spectral_gap(j, g, GapMethod::TridiagOdd)?;
        let secs = start.elapsed().as_secs_f64();
        let bytes = tridiag_gap_working_set(j.integer_j()?);
        eprintln!(
            "lmg: bench J = {} gamma = {}: {secs:.6} s, {bytes} bytes, {:.3} ns per J",
            spin(j),
            float(g),
            1e9 * secs / j.j()
        );
        timings.push((j, g, secs));
        if !r.satisfied {
            first_unsatisfied.get_or_insert((j, g));
        }
        table.push(vec![
            Cell::Spin(j),
            Cell::Float(g),
            Cell::Float(r.gap),
            Cell::Float(r.bound),
            Cell::Bool(r.satisfied),
            Cell::Int(bytes as i64),
        ]);
    }
    for &g in &gammas {
        let series: Vec<_> = timings.iter().filter(|t| t.1 == g).collect();
        for w in series.windows(2) {
            let (a, b) = (w[0], w[1]);
            let growth = b.2 / a.2;
            let size = b.0.j() / a.0.j();
            eprintln!(
                "lmg: bench gamma = {}: J {} -> {}: time x{growth:.2} for size x{size:.0} (ratio {:.2})",
                float(g),
                spin(a.0),
                spin(b.0),
                growth / size
            );
        }
    }
    let summary = json!({ "rows": table.rows.len(), "timings": "standard error" });
    let status = match first_unsatisfied {
        Some((j, g)) => Err(CliError::failure(format!(
            "gap bound violated at J = {}, gamma = {}",
            spin(j),
            float(g)
        ))),
        None => Ok(()),
    };
    Ok(Outcome {
        report: Report {
            config: config("bench", opts, &js, &gammas),
            table,
            summary,
        },
        status,
        plot: None,
    })
}
