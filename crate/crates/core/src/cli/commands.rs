//! Subcommand implementations. Grid-producing commands evaluate cells inside
//! a rayon pool sized by `ZENO_RING_THREADS`; since every cell is a pure
//! independent evaluation merged in row-major order, output bytes do not
//! depend on the thread count.

use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use super::config::{OutputFormat, PreparationConfig, RunConfig};
use super::figures::{self, FigurePreset};
use super::output::{self, format_f64, Table};
use super::report;
use crate::boson::{self, CoherentVariant};
use crate::dynamics;
use crate::error::{Error, Result};
use crate::rates::{self, RateMethod};
use crate::zeno::{self, Classifier};

/// Thread cap from the environment; `None` leaves rayon's default.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("ZENO_RING_THREADS") {
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                Error::argument(format!(
                    "ZENO_RING_THREADS must be a positive integer, got '{raw}'"
                ))
            })?;
            if n == 0 {
                return Err(Error::argument(
                    "ZENO_RING_THREADS must be a positive integer, got '0'",
                ));
            }
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::argument(format!("bad ZENO_RING_THREADS: {e}"))),
    }
}

fn in_pool<T: Send>(cap: Option<usize>, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match cap {
        None => job(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
            pool.install(job)
        }
    }
}

/// Survival series under the configured schedule and preparation.
pub fn cmd_evolve(config: &RunConfig) -> Result<()> {
    let run = match config.preparation {
        PreparationConfig::Fermion => {
            dynamics::measured_survival(&config.system, &config.schedule)?
        }
        PreparationConfig::Fock { n } => {
            dynamics::fock_survival(&config.system, n, &config.schedule)?
        }
        PreparationConfig::Coherent { re, im } => dynamics::coherent_survival_oracle(
            &config.system,
            Complex64::new(re, im),
            &config.schedule,
        )?,
    };
    let mut rows = Vec::with_capacity(run.times.len());
    for (step, (t, p)) in run.times.iter().zip(&run.probabilities).enumerate() {
        rows.push(vec![
            step.to_string(),
            format_f64(*t),
            format_f64(*p),
            format_f64(run.effective_rate),
        ]);
    }
    let table = Table {
        columns: vec!["step", "time", "probability", "effective_rate"],
        rows,
    };
    output::write_table(
        Path::new(&config.output.path),
        config.output.format,
        config,
        &table,
    )
}

/// One row per (method, tau). The interval grid comes from a 1-D tau sweep
/// when the config has one, otherwise it is the single scheduled interval.
pub fn cmd_rate(config: &RunConfig) -> Result<()> {
    let taus: Vec<f64> = match &config.sweep {
        Some(sweep) => {
            if sweep.x.axis != zeno::Axis::Tau || sweep.y.is_some() {
                return Err(Error::argument(
                    "the rate table sweeps the measurement interval only (1-D tau axis)",
                ));
            }
            sweep.x.values()
        }
        None => vec![config.schedule.interval],
    };
    let mut rows = Vec::new();
    for &method in &config.methods {
        for &tau in &taus {
            let (value, notes, error) = evaluate_method(config, method, tau);
            rows.push(vec![
                method.to_string(),
                format_f64(tau),
                value.map(format_f64).unwrap_or_default(),
                notes,
                error,
            ]);
        }
    }
    let table = Table {
        columns: vec!["method", "tau", "rate", "validity_notes", "error"],
        rows,
    };
    output::write_table(
        Path::new(&config.output.path),
        config.output.format,
        config,
        &table,
    )
}

fn evaluate_method(
    config: &RunConfig,
    method: RateMethod,
    tau: f64,
) -> (Option<f64>, String, String) {
    let params = &config.system;
    let outcome = match (config.preparation, method) {
        (PreparationConfig::Fermion, RateMethod::TimeIntegral) => {
            rates::decay_rate_time_integral(params, tau)
        }
        (PreparationConfig::Fermion, RateMethod::DerivedSinc) => {
            rates::decay_rate_derived_sinc(params, tau)
        }
        (PreparationConfig::Fermion, RateMethod::PaperSinc) => {
            rates::decay_rate_paper_sinc(params, tau)
        }
        (PreparationConfig::Fermion, RateMethod::GoldenRuleBroadened) => {
            rates::golden_rule_broadened(params, rates::default_broadening(params))
        }
        (PreparationConfig::Fermion, RateMethod::GoldenRuleContinuum) => {
            rates::golden_rule_continuum(params.hopping, params.coupling, params.onsite)
        }
        (PreparationConfig::Fermion, RateMethod::WignerWeisskopf) => {
            rates::wigner_weisskopf_pole(params).map(|p| p.estimate)
        }
        (PreparationConfig::Coherent { re, im }, RateMethod::CoherentPaper2cos) => {
            boson::coherent_rate_paper(params, Complex64::new(re, im), tau, CoherentVariant::TwoCos)
                .map(|r| r.paper)
        }
        (PreparationConfig::Coherent { re, im }, RateMethod::CoherentPaper4cos) => {
            boson::coherent_rate_paper(
                params,
                Complex64::new(re, im),
                tau,
                CoherentVariant::FourCos,
            )
            .map(|r| r.paper)
        }
        (prep, method) => {
            // everything else goes through the shared dispatcher
            let preparation = prep.to_preparation();
            zeno::rate_for(params, preparation, method, tau).map(|value| rates::RateEstimate {
                value,
                method,
                tau: Some(tau),
                validity_notes: Vec::new(),
            })
        }
    };
    match outcome {
        Ok(estimate) => (
            Some(estimate.value),
            estimate.validity_notes.join("; "),
            String::new(),
        ),
        Err(e) => {
            let flag = match e {
                Error::OutOfBand(_) => "off-band".to_string(),
                _ => String::new(),
            };
            (None, flag, e.to_string())
        }
    }
}

/// Generic phase map from the configured sweep.
pub fn cmd_sweep(config: &RunConfig) -> Result<()> {
    let sweep = config
        .sweep
        .ok_or_else(|| Error::argument("sweep command requires a sweep section"))?;
    let y = sweep
        .y
        .ok_or_else(|| Error::argument("phase maps need both sweep axes"))?;
    let method = config.methods[0];
    let preparation = config.preparation.to_preparation();
    let cap = thread_cap()?;
    let map = in_pool(cap, || {
        zeno::phase_map(
            &config.system,
            preparation,
            config.schedule.interval,
            (sweep.x, y),
            method,
            Classifier::default(),
        )
    })?;
    write_map(config, &map, None)
}

/// Named preset: phase-map data plus a JSON metadata sidecar.
pub fn cmd_figure(preset: FigurePreset, output_dir: &str) -> Result<()> {
    let config = figures::preset_config(preset, output_dir);
    let sweep = config.sweep.expect("presets always sweep");
    let sweep_y = sweep.y.expect("presets sweep two axes");
    let method = config.methods[0];
    let preparation = config.preparation.to_preparation();
    let cap = thread_cap()?;

    let map = in_pool(cap, || {
        zeno::phase_map(
            &config.system,
            preparation,
            config.schedule.interval,
            (sweep.x, sweep_y),
            method,
            Classifier::default(),
        )
    })?;

    // the coherent preset carries the companion variant and the exact oracle
    let extras = if preset == FigurePreset::Fig5 {
        let alpha = figures::preset_alpha(&config).expect("fig5 is coherent");
        let cells: Vec<(f64, f64)> = {
            let xs = sweep.x.values();
            let ys = sweep_y.values();
            ys.iter()
                .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
                .collect()
        };
        let mut four = Vec::with_capacity(cells.len());
        let mut oracle = Vec::with_capacity(cells.len());
        for (tau, onsite) in cells {
            let params = config.system.with_onsite(onsite);
            let rate = boson::coherent_rate_paper(&params, alpha, tau, CoherentVariant::FourCos)?;
            four.push(rate.paper.value);
            oracle.push(rate.oracle_rate);
        }
        Some((four, oracle))
    } else {
        None
    };

    write_map(&config, &map, extras.as_ref())?;

    let symmetry = figures::flux_symmetry_checks(&config)?;
    let sidecar = json!({
        "preset": preset.name(),
        "config": serde_json::to_value(&config).expect("config is serializable"),
        "axes": {
            "x": sweep.x,
            "y": sweep_y,
        },
        "method": method,
        "classifier": {
            "h": "tau/100",
            "epsilon": "1e-6 g^2",
            "note": "pointwise sign of the central difference; oscillatory ridges may alternate class",
        },
        "symmetry_checks": symmetry,
    });
    output::write_json_value(
        &output::sidecar_path(Path::new(&config.output.path)),
        &sidecar,
    )
}

fn write_map(
    config: &RunConfig,
    map: &zeno::PhaseMap,
    extras: Option<&(Vec<f64>, Vec<f64>)>,
) -> Result<()> {
    let xs = map.axis_x.values();
    let ys = map.axis_y.values();
    let mut columns = vec![
        map.axis_x.axis.as_str(),
        map.axis_y.axis.as_str(),
        "rate",
        "class",
    ];
    if extras.is_some() {
        columns.push("rate_paper_4cos");
        columns.push("rate_oracle");
    }
    let mut rows = Vec::with_capacity(map.values.len());
    for (iy, y) in ys.iter().enumerate() {
        for (ix, x) in xs.iter().enumerate() {
            let idx = iy * map.nx() + ix;
            let mut row = vec![
                format_f64(*x),
                format_f64(*y),
                format_f64(map.values[idx]),
                map.classes[idx].to_string(),
            ];
            if let Some((four, oracle)) = extras {
                row.push(format_f64(four[idx]));
                row.push(format_f64(oracle[idx]));
            }
            rows.push(row);
        }
    }
    let table = Table { columns, rows };
    output::write_table(
        Path::new(&config.output.path),
        config.output.format,
        config,
        &table,
    )
}

/// Runs the invariant suite; returns true when every check passed. The report
/// is written either way.
pub fn cmd_verify(config: &RunConfig) -> Result<bool> {
    let cap = thread_cap()?;
    let outcome = in_pool(cap, || report::run_verify(config))?;

    let rows: Vec<Vec<String>> = outcome
        .rows
        .iter()
        .map(|r| {
            vec![
                r.half_count.to_string(),
                format_f64(r.hopping),
                format_f64(r.coupling),
                format_f64(r.onsite),
                format_f64(r.flux),
                r.statistics.clone(),
                format_f64(r.tau),
                r.rate_time_integral.map(format_f64).unwrap_or_default(),
                r.rate_paper_sinc.map(format_f64).unwrap_or_default(),
                r.rate_oracle.map(format_f64).unwrap_or_default(),
                r.ww_rate.map(format_f64).unwrap_or_default(),
                r.ratio_paper_to_derived.map(format_f64).unwrap_or_default(),
                r.ratio_oracle_to_derived
                    .map(format_f64)
                    .unwrap_or_default(),
                r.flags.clone(),
                r.error.clone(),
            ]
        })
        .collect();
    let columns = vec![
        "half_count",
        "hopping",
        "coupling",
        "onsite",
        "flux",
        "statistics",
        "tau",
        "rate_time_integral",
        "rate_paper_sinc",
        "rate_oracle",
        "ww_rate",
        "ratio_paper_to_derived",
        "ratio_oracle_to_derived",
        "flags",
        "error",
    ];

    let path = Path::new(&config.output.path);
    match config.output.format {
        OutputFormat::Csv => {
            output::write_table(path, OutputFormat::Csv, config, &Table { columns, rows })?;
            // coherent three-way section in its own file
            let coherent_rows: Vec<Vec<String>> = outcome
                .coherent_rows
                .iter()
                .map(|r| {
                    vec![
                        format_f64(r.tau),
                        format_f64(r.onsite),
                        format_f64(r.alpha_sq),
                        format_f64(r.rate_paper_4cos),
                        format_f64(r.rate_paper_2cos),
                        format_f64(r.rate_oracle),
                    ]
                })
                .collect();
            let coherent_table = Table {
                columns: vec![
                    "tau",
                    "onsite",
                    "alpha_sq",
                    "rate_paper_4cos",
                    "rate_paper_2cos",
                    "rate_oracle",
                ],
                rows: coherent_rows,
            };
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "verify".to_string());
            let coherent_path = path.with_file_name(format!("{stem}.coherent.csv"));
            output::write_table(&coherent_path, OutputFormat::Csv, config, &coherent_table)?;

            let mut meta = outcome.checks_json();
            meta["config"] = serde_json::to_value(config).expect("config is serializable");
            output::write_json_value(&output::sidecar_path(path), &meta)?;
        }
        OutputFormat::Json => {
            let doc = json!({
                "config": serde_json::to_value(config).expect("config is serializable"),
                "rows": outcome.rows,
                "coherent_rows": outcome.coherent_rows,
                "checks": outcome.checks,
                "summary": outcome.summary,
            });
            output::write_json_value(path, &doc)?;
        }
    }

    for check in &outcome.checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        eprintln!("[{status}] {}: {}", check.name, check.detail);
    }
    Ok(outcome.summary.all_checks_passed)
}
