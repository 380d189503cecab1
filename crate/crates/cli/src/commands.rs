//! Subcommand implementations. Each returns `Err` with the exit code to use.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use brl_core::csv::{point_history_table, rejection_table, snapshot_table, Table};
use brl_core::dynamics::{
    effective_coefficients, integrate_model_a, integrate_model_b, EffectiveRegime, SourceLaw,
};
use brl_core::exec::{self, Execution};
use brl_core::field::field_snapshot_with;
use brl_core::fit::envelope_rate;
use brl_core::lattice::run_coupled;
use brl_core::reflection::{resonance_check, verify_rejection, ReflectionScenario, Resonance};
use brl_core::roots::{
    concentrated_memory_constants, habitual_self_acceleration, model_b_constants,
    wide_memory_roots, HabitualRegime, RootRegime,
};
use brl_core::verify::{run_all, VerifyOptions};
use brl_core::PointHistory;

use crate::config::{self, FieldSpec, Output, RunConfig};
use crate::{GlobalArgs, SweepArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("numerical failure in {module}: {source}")]
    Numerical {
        module: &'static str,
        source: brl_core::Error,
    },
    #[error("{failed} of {total} acceptance criteria failed")]
    CriteriaFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical { .. } | CliError::CriteriaFailed { .. } => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn numerical(module: &'static str) -> impl Fn(brl_core::Error) -> CliError {
    move |source| CliError::Numerical { module, source }
}

fn execution(global: &GlobalArgs) -> Execution {
    if global.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

/// Configuration keys after layering preset, file, `--set` and step flags.
fn config_map(global: &GlobalArgs) -> CliResult<BTreeMap<String, String>> {
    let mut map = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            config::parse_pairs(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => BTreeMap::new(),
    };
    if let Some(name) = &global.preset {
        map.insert("preset".into(), name.clone());
    } else if global.config.is_none() {
        map.insert("preset".into(), crate::presets::DEFAULT.into());
    }
    for item in &global.set {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, found `{item}`")))?;
        let pair = config::parse_pairs(&format!("{} = {}", key.trim(), value.trim()))
            .map_err(|e| CliError::Usage(format!("--set {item}: {e}")))?;
        map.extend(pair);
    }
    let mut map = config::resolve(map).map_err(CliError::Config)?;
    if let Some(dt) = global.dt {
        map.insert("dt".into(), dt.to_string());
    }
    if let Some(horizon) = global.horizon {
        map.insert("horizon".into(), horizon.to_string());
    }
    Ok(map)
}

fn load(global: &GlobalArgs) -> CliResult<RunConfig> {
    RunConfig::from_map(config_map(global)?).map_err(CliError::Config)
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn write_table(dir: &Path, name: &str, table: &Table) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, table.to_csv()).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn integrate(cfg: &RunConfig) -> CliResult<PointHistory> {
    let init = cfg.initial_state();
    match cfg.model {
        SourceLaw::A => integrate_model_a(&cfg.params, &init, &cfg.drive, cfg.horizon, cfg.dt),
        SourceLaw::B => integrate_model_b(&cfg.params, &init, &cfg.drive, cfg.horizon, cfg.dt),
    }
    .map_err(numerical("effective-dynamics"))
}

/// Rest point predicted by the closed forms, when one applies.
fn plastic_limit(cfg: &RunConfig) -> Option<f64> {
    let init = cfg.initial_state();
    let undriven = cfg.drive.is_zero() && cfg.field == FieldSpec::Zero;
    let regime = effective_coefficients(&cfg.params, cfg.model).ok()?.regime;
    match regime {
        EffectiveRegime::ConcentratedMemory if undriven => {
            concentrated_memory_constants(&cfg.params, &init)
                .ok()
                .filter(|m| m.decay_rate > 0.0)
                .map(|m| m.q_limit)
        }
        EffectiveRegime::ReducedB if undriven && cfg.params.gamma > 0.0 => {
            model_b_constants(&cfg.params, &init)
                .ok()
                .map(|m| m.q_limit)
        }
        _ => None,
    }
}

/// Envelope rate of `q - reference` over the second half of the run.
fn fitted_rate(hist: &PointHistory, reference: f64) -> f64 {
    let start = hist.len() / 2;
    let y: Vec<f64> = hist.q[start..].iter().map(|q| q - reference).collect();
    envelope_rate(&hist.t[start..], &y)
}

fn snapshot_grid(cfg: &RunConfig) -> Vec<f64> {
    let t_max = cfg.snapshots.iter().copied().fold(0.0, f64::max);
    let half = cfg.params.c * t_max + 1.0;
    let n = cfg.snapshot_points;
    (0..n)
        .map(|i| cfg.params.x0 - half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect()
}

fn check_snapshot_times(cfg: &RunConfig) -> CliResult<()> {
    if cfg.snapshots.is_empty() {
        return Err(CliError::Config(
            "`outputs` includes snapshots but `snapshots` lists no times".into(),
        ));
    }
    if let Some(t) = cfg
        .snapshots
        .iter()
        .find(|&&t| !(0.0..=cfg.horizon).contains(&t))
    {
        return Err(CliError::Config(format!(
            "snapshot time {t} is outside [0, {}]",
            cfg.horizon
        )));
    }
    Ok(())
}

fn roots_report(cfg: &RunConfig) -> CliResult<(String, Table)> {
    let roots = wide_memory_roots(&cfg.params).map_err(numerical("roots"))?;
    let growing = roots.regime == RootRegime::SelfAccelerating;
    let mut text = String::new();
    let _ = writeln!(text, "lambda1 = {:.16e}", roots.lambda1);
    let _ = writeln!(
        text,
        "lambda2 = {:.16e} + {:.16e}i",
        roots.lambda2.re, roots.lambda2.im
    );
    let _ = writeln!(
        text,
        "lambda3 = {:.16e} - {:.16e}i",
        roots.lambda2.re, roots.lambda2.im
    );
    let _ = writeln!(
        text,
        "regime = {}",
        if growing {
            "self-accelerating"
        } else {
            "decaying only"
        }
    );
    let mut table = Table::new(["lambda1", "re_lambda2", "im_lambda2", "self_accelerating"]);
    table.push(vec![
        roots.lambda1,
        roots.lambda2.re,
        roots.lambda2.im,
        f64::from(u8::from(growing)),
    ]);
    Ok((text, table))
}

pub fn simulate(global: &GlobalArgs) -> CliResult<()> {
    let cfg = load(global)?;
    let exec = execution(global);
    let out = &global.out;
    let wants_snapshots = cfg.wants(Output::Snapshots);
    if wants_snapshots {
        check_snapshot_times(&cfg)?;
    }
    let lattice = cfg.lattice_config();
    if let Some(lc) = &lattice {
        lc.validate(&cfg.params, cfg.horizon)
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    ensure_dir(out)?;

    let hist = integrate(&cfg)?;
    if cfg.wants(Output::Trajectory) {
        write_table(out, "trajectory.csv", &point_history_table(&hist))?;
    }

    let mut summary = String::new();
    let _ = writeln!(summary, "model = {:?}", cfg.model);
    let _ = writeln!(summary, "horizon = {}", cfg.horizon);
    let _ = writeln!(summary, "dt = {}", cfg.dt);
    let _ = writeln!(summary, "final_q = {:.16e}", hist.final_q());
    let limit = plastic_limit(&cfg);
    let rate = fitted_rate(&hist, limit.unwrap_or(0.0));
    let _ = writeln!(summary, "fitted_rate = {rate:.6e}");
    if let Some(limit) = limit {
        let _ = writeln!(summary, "plastic_limit = {limit:.16e}");
        let _ = writeln!(
            summary,
            "final_q - plastic_limit = {:.6e}",
            hist.final_q() - limit
        );
    }
    let wide = cfg.model == SourceLaw::A
        && effective_coefficients(&cfg.params, cfg.model)
            .map(|c| c.regime == EffectiveRegime::WideMemory)
            .unwrap_or(false);
    if wide {
        if let Ok(roots) = wide_memory_roots(&cfg.params) {
            if !cfg.wants(Output::Roots) {
                let _ = writeln!(summary, "lambda1 = {:.16e}", roots.lambda1);
            }
            let _ = writeln!(
                summary,
                "fitted_rate - lambda1 = {:.6e}",
                rate - roots.lambda1
            );
        }
    }

    if wants_snapshots {
        let init = cfg.initial_state();
        let grid = snapshot_grid(&cfg);
        for (i, &t) in cfg.snapshots.iter().enumerate() {
            let snap = field_snapshot_with(exec, &hist.src, &init.field, t, &grid, &cfg.params)
                .map_err(numerical("dalembert-field"))?;
            write_table(out, &format!("snapshot_{i:03}.csv"), &snapshot_table(&snap))?;
            let _ = writeln!(summary, "snapshot_{i:03}.csv: t = {t}");
        }
    }

    if let Some(lc) = &lattice {
        let times = if wants_snapshots {
            cfg.snapshots.clone()
        } else {
            Vec::new()
        };
        let run = run_coupled(
            &cfg.params,
            &cfg.initial_state(),
            cfg.model,
            &cfg.drive,
            lc,
            cfg.horizon,
            &times,
        )
        .map_err(numerical("lattice-oracle"))?;
        write_table(
            out,
            "lattice_trajectory.csv",
            &point_history_table(&run.history),
        )?;
        for (i, snap) in run.snapshots.iter().enumerate() {
            write_table(
                out,
                &format!("lattice_snapshot_{i:03}.csv"),
                &snapshot_table(snap),
            )?;
        }
        let _ = writeln!(summary, "lattice_dx = {}", lc.dx());
        let _ = writeln!(summary, "lattice_dt = {}", lc.dt);
        let _ = writeln!(summary, "lattice_final_q = {:.16e}", run.history.final_q());
    }

    if cfg.wants(Output::Roots) {
        let (text, table) = roots_report(&cfg)?;
        summary.push_str(&text);
        write_table(out, "roots.csv", &table)?;
    }
    if cfg.wants(Output::Reflection) {
        let verdict = reflection(&cfg, out)?;
        let _ = writeln!(summary, "{verdict}");
    }

    print!("{summary}");
    write_text(out, "summary.txt", &summary)
}

pub fn roots(global: &GlobalArgs) -> CliResult<()> {
    let cfg = load(global)?;
    let (text, _) = roots_report(&cfg)?;
    print!("{text}");
    Ok(())
}

/// Runs the rejection check, writes `rejection.csv` and returns the verdict.
fn reflection(cfg: &RunConfig, out: &Path) -> CliResult<String> {
    let FieldSpec::Incident {
        amplitude,
        frequency,
    } = cfg.field
    else {
        return Err(CliError::Config(
            "reflection needs `field = incident`".into(),
        ));
    };
    let scenario = ReflectionScenario::new(cfg.params, cfg.incident(), 0.0)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let lattice = cfg.reflection_lattice();
    lattice
        .validate(&cfg.params, cfg.horizon)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let report = verify_rejection(&scenario, cfg.model, &lattice, cfg.horizon)
        .map_err(numerical("reflection"))?;
    ensure_dir(out)?;
    write_table(out, "rejection.csv", &rejection_table(&report))?;

    let resonant =
        resonance_check(&cfg.params, &[(frequency, amplitude)]) == Resonance::CompleteReflection;
    let rejected = report.max_readout <= REJECTION_FRACTION * amplitude.abs();
    let verdict = match (resonant, rejected) {
        (true, true) => "complete reflection",
        (true, false) => "resonant but readout not suppressed",
        (false, true) => "readout suppressed off resonance",
        (false, false) => "not completely reflected",
    };
    Ok(format!(
        "reflection: {verdict} (frequency {frequency}, omega {}, max|Q| = {:.3e}, shadow max = {:.3e}, dx = {:.3e})",
        cfg.params.omega,
        report.max_readout,
        report.max_shadow,
        lattice.dx()
    ))
}

/// Readout bound, relative to the incident amplitude, for calling a run rejected.
const REJECTION_FRACTION: f64 = 0.02;

pub fn reflect(global: &GlobalArgs) -> CliResult<()> {
    let cfg = load(global)?;
    let verdict = reflection(&cfg, &global.out)?;
    println!("{verdict}");
    Ok(())
}

fn sweep_values(args: &SweepArgs) -> CliResult<Vec<f64>> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("not a number: `{s}`")))
    };
    let values = match (&args.range, &args.values) {
        (Some(range), None) => {
            let parts: Vec<&str> = range.split(':').collect();
            let [start, stop, count] = parts.as_slice() else {
                return Err(CliError::Usage(format!(
                    "--range expects START:STOP:COUNT, found `{range}`"
                )));
            };
            let (start, stop) = (parse(start)?, parse(stop)?);
            let count: usize = count.trim().parse().map_err(|_| {
                CliError::Usage(format!("range count is not an integer: `{count}`"))
            })?;
            match count {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            }
        }
        (None, Some(list)) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse)
            .collect::<CliResult<Vec<_>>>()?,
        _ => return Err(CliError::Usage("sweep needs --range or --values".into())),
    };
    if values.is_empty() {
        return Err(CliError::Usage("sweep range is empty".into()));
    }
    Ok(values)
}

pub fn sweep(global: &GlobalArgs, args: &SweepArgs) -> CliResult<()> {
    if !config::is_numeric_key(&args.param) {
        return Err(CliError::Usage(format!(
            "cannot sweep `{}`: not a numeric configuration key",
            args.param
        )));
    }
    let values = sweep_values(args)?;
    let base = config_map(global)?;
    let configs = values
        .iter()
        .map(|&v| {
            let mut map = base.clone();
            map.insert(args.param.clone(), v.to_string());
            RunConfig::from_map(map)
                .map_err(|e| CliError::Config(format!("{} = {v}: {e}", args.param)))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let rows = exec::try_map(execution(global), &configs, |cfg| {
        let hist = integrate(cfg)?;
        let max_abs = hist.q.iter().fold(0.0f64, |m, q| m.max(q.abs()));
        let rate = fitted_rate(&hist, plastic_limit(cfg).unwrap_or(0.0));
        let accelerating =
            habitual_self_acceleration(&cfg.params) == HabitualRegime::SelfAccelerating;
        Ok::<_, CliError>(vec![
            hist.final_q(),
            max_abs,
            rate,
            f64::from(u8::from(accelerating)),
        ])
    })?;

    let mut table = Table::new([
        "value",
        "final_q",
        "max_abs_q",
        "fitted_rate",
        "self_accelerating",
    ]);
    for (v, row) in values.iter().zip(rows) {
        let mut full = vec![*v];
        full.extend(row);
        table.push(full);
    }
    ensure_dir(&global.out)?;
    write_table(&global.out, "sweep.csv", &table)?;
    println!(
        "sweep over {}: {} runs -> {}",
        args.param,
        values.len(),
        global.out.join("sweep.csv").display()
    );
    Ok(())
}

pub fn verify(global: &GlobalArgs) -> CliResult<()> {
    let mut opts = VerifyOptions::from_env().map_err(CliError::Usage)?;
    opts.exec = execution(global);
    let outcomes = run_all(&opts);
    let out = &global.out;
    ensure_dir(out)?;
    let mut index = Table::new(["id", "passed"]);
    for outcome in &outcomes {
        println!("{}", outcome.line());
        index.push(vec![
            f64::from(outcome.id),
            f64::from(u8::from(outcome.passed)),
        ]);
        if outcome.tables.is_empty() {
            continue;
        }
        let dir = out.join(format!("criterion_{:02}", outcome.id));
        ensure_dir(&dir)?;
        for (name, table) in &outcome.tables {
            write_table(&dir, name, table)?;
        }
    }
    write_table(out, "criteria.csv", &index)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "{} of {} criteria passed (tolerance scale {})",
        outcomes.len() - failed,
        outcomes.len(),
        opts.tolerance_scale
    );
    if failed > 0 {
        return Err(CliError::CriteriaFailed {
            failed,
            total: outcomes.len(),
        });
    }
    Ok(())
}
