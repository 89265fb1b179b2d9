//! The three batch commands and their CSV emission.
//!
//! All numeric columns are printed with `{}`, the shortest representation
//! that parses back to the identical f64, so identical inputs give
//! byte-identical files. Sweep points run on a rayon pool (capped by
//! `RAMAN_QIT_THREADS`) and are collected in sweep order, so neither the
//! thread count nor scheduling can reorder or change rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use raman_qit::atomfield::{LEVEL_E, LEVEL_F, LEVEL_G};
use raman_qit::{
    build_effective_hamiltonian, build_full_hamiltonian, coherent_amplitudes, run_protocol_at,
    Error, JointState, PhysicalParams, Propagator, ProtocolResult, RegimeReport, ThreeLevelAtom,
};

use crate::config::{RunConfig, SweepParam, SweepSpec};

/// Environment variable capping the sweep worker count (0/unset = auto).
pub const THREADS_ENV: &str = "RAMAN_QIT_THREADS";

/// Column order of `run` output; sweeps append `swept_value`.
pub const RUN_HEADER: &str = "alpha_re,alpha_im,delta,lambda,beta,t_star,outcome,probability,\
                              fidelity,detuning_ratio,time_ratio,n_max,seed";

/// Column order of `validate` output.
pub const VALIDATE_HEADER: &str =
    "time,pop_g_eff,pop_e_eff,pop_g_full,pop_e_full,pop_f_full,max_pop_discrepancy";

/// Command failure, split by exit code: input problems exit 1, a violated
/// operating regime exits 2.
#[derive(Debug)]
pub enum CmdError {
    Input(String),
    Regime(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 1,
            CmdError::Regime(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Input(m) | CmdError::Regime(m) => m,
        }
    }
}

fn input_error(e: impl std::fmt::Display) -> CmdError {
    CmdError::Input(e.to_string())
}

/// Spell out which of the two validity conditions failed.
fn regime_diagnostic(report: &RegimeReport) -> String {
    let mut parts = Vec::new();
    if report.detuning_ratio < report.margin {
        parts.push(format!(
            "detuning condition failed: delta^2 / (2|2*lambda*alpha|^2) = {} \
             but the margin requires >= {}",
            report.detuning_ratio, report.margin
        ));
    }
    if report.time_ratio > 1.0 / report.margin {
        parts.push(format!(
            "interaction-time condition failed: t / (3|delta|^3 / (4|lambda*alpha|^4)) = {} \
             but the margin requires <= {}",
            report.time_ratio,
            1.0 / report.margin
        ));
    }
    format!("degenerate Raman regime violated: {}", parts.join("; "))
}

fn load_config(path: &Path) -> Result<RunConfig, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let config = RunConfig::parse(&text)
        .map_err(|e| CmdError::Input(format!("config {}: {e}", path.display())))?;
    config
        .validate()
        .map_err(|e| CmdError::Input(format!("config {}: {e}", path.display())))?;
    Ok(config)
}

/// Write via a sibling temp file plus rename so partial files never land
/// at the destination.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CmdError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let stem = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    let tmp = dir.join(format!(".{stem}.tmp.{}", std::process::id()));
    fs::write(&tmp, contents)
        .map_err(|e| CmdError::Input(format!("cannot write {}: {e}", tmp.display())))?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(CmdError::Input(format!(
            "cannot move output into place at {}: {e}",
            path.display()
        )));
    }
    Ok(())
}

/// Fixed per-row context the outcome columns are appended to.
struct RowPoint<'a> {
    alpha: Complex64,
    p: &'a PhysicalParams,
    n_max: usize,
    seed: u64,
}

fn run_row(
    point: &RowPoint,
    outcome: &str,
    probability: f64,
    fidelity: f64,
    report: &RegimeReport,
) -> String {
    let mut row = String::new();
    write!(
        row,
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        point.alpha.re,
        point.alpha.im,
        point.p.delta(),
        point.p.lambda_c(),
        point.p.beta(),
        point.p.protocol_time(),
        outcome,
        probability,
        fidelity,
        report.detuning_ratio,
        report.time_ratio,
        point.n_max,
        point.seed
    )
    .expect("writing to String cannot fail");
    row
}

fn success_row(point: &RowPoint, result: &ProtocolResult) -> String {
    run_row(
        point,
        &result.outcome.level.to_string(),
        result.outcome.probability,
        result.fidelity,
        &result.regime,
    )
}

/// `run`: execute one protocol run and emit header + row on stdout.
pub fn cmd_run(config_path: &Path) -> Result<(), CmdError> {
    let config = load_config(config_path)?;
    let atom = config.atom().map_err(CmdError::Input)?;
    let p = config.params().map_err(CmdError::Input)?;
    let cfg = config.truncation(config.alpha).map_err(CmdError::Input)?;
    let rule = config.outcome_rule(config.seed);

    let result = run_protocol_at(
        &atom,
        config.alpha,
        &p,
        &cfg,
        config.margin,
        rule,
        p.protocol_time(),
    )
    .map_err(|e| match e {
        Error::RegimeViolation { report } => CmdError::Regime(regime_diagnostic(&report)),
        other => input_error(other),
    })?;

    let point = RowPoint {
        alpha: config.alpha,
        p: &p,
        n_max: cfg.n_max(),
        seed: config.seed,
    };
    let csv = format!("{RUN_HEADER}\n{}\n", success_row(&point, &result));
    print!("{csv}");
    if let Some(out) = &config.out {
        write_atomic(Path::new(out), &csv)?;
    }
    Ok(())
}

/// Operating point of a single sweep row.
struct SweepPoint {
    alpha: Complex64,
    p: PhysicalParams,
    t: f64,
    seed: u64,
}

fn sweep_point(spec: &SweepSpec, value: f64, index: usize) -> Result<SweepPoint, String> {
    let base = &spec.base;
    let alpha = match spec.param {
        SweepParam::AlphaAbs => {
            let unit = if base.alpha.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                base.alpha / base.alpha.norm()
            };
            unit * value
        }
        _ => base.alpha,
    };
    let p = match spec.param {
        SweepParam::Delta => PhysicalParams::new(base.omega, 0.0, value, base.lambda)
            .map_err(|e| format!("sweep value {value}: {e}"))?,
        _ => base.params()?,
    };
    let t = match spec.param {
        SweepParam::Time => value,
        _ => p.protocol_time(),
    };
    Ok(SweepPoint {
        alpha,
        p,
        t,
        seed: base.seed.wrapping_add(index as u64),
    })
}

fn sweep_row(spec: &SweepSpec, value: f64, index: usize) -> Result<String, String> {
    let point = sweep_point(spec, value, index)?;
    let base = &spec.base;
    let atom = base.atom()?;
    let cfg = base.truncation(point.alpha)?;
    let rule = base.outcome_rule(point.seed);

    let row_point = RowPoint {
        alpha: point.alpha,
        p: &point.p,
        n_max: cfg.n_max(),
        seed: point.seed,
    };
    let row = match run_protocol_at(
        &atom,
        point.alpha,
        &point.p,
        &cfg,
        base.margin,
        rule,
        point.t,
    ) {
        Ok(result) => success_row(&row_point, &result),
        Err(Error::RegimeViolation { report }) => {
            run_row(&row_point, "REGIME_FAIL", f64::NAN, f64::NAN, &report)
        }
        Err(other) => return Err(format!("sweep value {value}: {other}")),
    };
    Ok(format!("{row},{value}"))
}

/// `sweep`: one protocol run per grid point, written as a CSV file.
///
/// Points that violate the regime become `REGIME_FAIL` rows instead of
/// aborting; any other failure aborts with exit 1 and leaves no partial
/// file behind.
pub fn cmd_sweep(
    config_path: &Path,
    param: &str,
    start: f64,
    stop: f64,
    steps: usize,
    out: &Path,
) -> Result<(), CmdError> {
    let base = load_config(config_path)?;
    let param = SweepParam::from_name(param).map_err(CmdError::Input)?;
    let spec = SweepSpec::new(param, start, stop, steps, base).map_err(CmdError::Input)?;

    let pool = build_pool().map_err(CmdError::Input)?;
    let grid = spec.grid();
    let rows: Vec<Result<String, String>> = pool.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(index, value)| sweep_row(&spec, *value, index))
            .collect()
    });

    let mut text = format!("{RUN_HEADER},swept_value\n");
    for row in rows {
        text.push_str(&row.map_err(CmdError::Input)?);
        text.push('\n');
    }
    write_atomic(out, &text)
}

fn build_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .parse()
            .map_err(|_| format!("{THREADS_ENV} must be an unsigned integer, got `{raw}`"))?;
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder
        .build()
        .map_err(|e| format!("cannot build worker pool: {e}"))
}

/// `validate`: evolve the configured initial state under the effective and
/// full models on a shared grid and tabulate level populations.
///
/// Only populations are compared; the elimination is a statement about
/// squared amplitudes, not phases. The upper-level column has no effective
/// counterpart; it measures how much amplitude leaks out of the reduced
/// description.
pub fn cmd_validate(
    config_path: &Path,
    t_max: f64,
    samples: usize,
    out: &Path,
) -> Result<(), CmdError> {
    let config = load_config(config_path)?;
    if samples < 2 {
        return Err(CmdError::Input(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CmdError::Input(format!(
            "tmax must be positive and finite, got {t_max}"
        )));
    }

    let atom = config.atom().map_err(CmdError::Input)?;
    let p = config.params().map_err(CmdError::Input)?;
    let cfg = config.truncation(config.alpha).map_err(CmdError::Input)?;

    let field = coherent_amplitudes(config.alpha, &cfg)
        .and_then(|f| f.normalized())
        .map_err(input_error)?;
    let eff_initial = JointState::product(&atom, &field);
    let full_initial = JointState::product_three(&ThreeLevelAtom::from_qubit(&atom), &field);

    let eff = Propagator::new(&build_effective_hamiltonian(&p, &cfg)).map_err(input_error)?;
    let full = Propagator::new(&build_full_hamiltonian(&p, &cfg)).map_err(input_error)?;

    let mut text = format!("{VALIDATE_HEADER}\n");
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        let eff_state = eff.evolve(&eff_initial, t).map_err(input_error)?;
        let full_state = full.evolve(&full_initial, t).map_err(input_error)?;
        let pop_g_eff = eff_state.population(LEVEL_G);
        let pop_e_eff = eff_state.population(LEVEL_E);
        let pop_g_full = full_state.population(LEVEL_G);
        let pop_e_full = full_state.population(LEVEL_E);
        let pop_f_full = full_state.population(LEVEL_F);
        let discrepancy = (pop_g_eff - pop_g_full)
            .abs()
            .max((pop_e_eff - pop_e_full).abs());
        writeln!(
            text,
            "{t},{pop_g_eff},{pop_e_eff},{pop_g_full},{pop_e_full},{pop_f_full},{discrepancy}"
        )
        .expect("writing to String cannot fail");
    }
    write_atomic(out, &text)
}
