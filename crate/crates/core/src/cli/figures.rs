//! Built-in phase-map presets covering the standard operating regimes: the
//! flux-modulated ridge plot, the off-band plateau, the gate-vs-flux planes,
//! and the coherent-boson surface.

use num_complex::Complex64;
use serde_json::json;

use super::config::{OutputConfig, OutputFormat, PreparationConfig, RunConfig, SweepConfig};
use crate::dynamics::{MeasurementSchedule, Preparation};
use crate::error::{Error, Result};
use crate::model::{Statistics, SystemParams};
use crate::rates::RateMethod;
use crate::zeno::{Axis, AxisSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigurePreset {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
}

impl FigurePreset {
    pub fn name(&self) -> &'static str {
        match self {
            FigurePreset::Fig2 => "fig2",
            FigurePreset::Fig3a => "fig3a",
            FigurePreset::Fig3b => "fig3b",
            FigurePreset::Fig4 => "fig4",
            FigurePreset::Fig5 => "fig5",
        }
    }

    pub const ALL: [FigurePreset; 5] = [
        FigurePreset::Fig2,
        FigurePreset::Fig3a,
        FigurePreset::Fig3b,
        FigurePreset::Fig4,
        FigurePreset::Fig5,
    ];
}

impl std::str::FromStr for FigurePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigurePreset::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::argument(format!(
                    "unknown figure preset '{s}' (expected one of fig2, fig3a, fig3b, fig4, fig5)"
                ))
            })
    }
}

fn fermion_system(hopping: f64, onsite: f64) -> SystemParams {
    SystemParams {
        half_count: 20,
        hopping,
        coupling: 1.0,
        onsite,
        flux: 0.0,
        statistics: Statistics::Fermion,
    }
}

/// Resolved configuration for a preset; `output_dir` hosts the data file and
/// its metadata sidecar.
pub fn preset_config(preset: FigurePreset, output_dir: &str) -> RunConfig {
    let path = |name: &str| {
        if output_dir.is_empty() {
            format!("{name}.csv")
        } else {
            format!("{output_dir}/{name}.csv")
        }
    };
    let tau_phi = SweepConfig {
        x: AxisSpec {
            axis: Axis::Tau,
            min: 0.25,
            max: 15.0,
            steps: 60,
        },
        y: Some(AxisSpec {
            axis: Axis::Phi,
            min: 0.0,
            max: 3.5,
            steps: 36,
        }),
    };
    match preset {
        FigurePreset::Fig2 => RunConfig {
            system: fermion_system(5.0, 0.0),
            schedule: MeasurementSchedule {
                interval: 2.0,
                repetitions: 50,
            },
            preparation: PreparationConfig::Fermion,
            sweep: Some(tau_phi),
            methods: vec![RateMethod::DerivedSinc],
            output: OutputConfig {
                path: path("fig2"),
                format: OutputFormat::Csv,
            },
        },
        FigurePreset::Fig3a => RunConfig {
            system: fermion_system(5.0, 20.0),
            schedule: MeasurementSchedule {
                interval: 2.0,
                repetitions: 50,
            },
            preparation: PreparationConfig::Fermion,
            sweep: Some(tau_phi),
            methods: vec![RateMethod::DerivedSinc],
            output: OutputConfig {
                path: path("fig3a"),
                format: OutputFormat::Csv,
            },
        },
        FigurePreset::Fig3b | FigurePreset::Fig4 => {
            let fine = preset == FigurePreset::Fig4;
            RunConfig {
                system: SystemParams {
                    half_count: 20,
                    hopping: 2.5,
                    coupling: 1.0,
                    onsite: 0.0,
                    flux: 0.0,
                    statistics: Statistics::Fermion,
                },
                schedule: MeasurementSchedule {
                    interval: 10.0,
                    repetitions: 50,
                },
                preparation: PreparationConfig::Fermion,
                sweep: Some(SweepConfig {
                    x: AxisSpec {
                        axis: Axis::OmegaA,
                        min: 0.0,
                        max: 8.0,
                        steps: if fine { 81 } else { 33 },
                    },
                    y: Some(AxisSpec {
                        axis: Axis::Phi,
                        min: 0.0,
                        max: 3.5,
                        steps: if fine { 71 } else { 36 },
                    }),
                }),
                methods: vec![RateMethod::DerivedSinc],
                output: OutputConfig {
                    path: path(preset.name()),
                    format: OutputFormat::Csv,
                },
            }
        }
        FigurePreset::Fig5 => RunConfig {
            system: SystemParams {
                half_count: 20,
                hopping: 5.0,
                coupling: 0.01,
                onsite: 0.0,
                flux: 0.0,
                statistics: Statistics::Boson,
            },
            schedule: MeasurementSchedule {
                interval: 1.0,
                repetitions: 50,
            },
            preparation: PreparationConfig::Coherent { re: 0.1, im: 0.0 },
            sweep: Some(SweepConfig {
                x: AxisSpec {
                    axis: Axis::Tau,
                    min: 0.1,
                    max: 3.0,
                    steps: 30,
                },
                y: Some(AxisSpec {
                    axis: Axis::OmegaA,
                    min: 0.0,
                    max: 12.0,
                    steps: 25,
                }),
            }),
            methods: vec![
                RateMethod::CoherentPaper2cos,
                RateMethod::CoherentPaper4cos,
                RateMethod::Oracle,
            ],
            output: OutputConfig {
                path: path("fig5"),
                format: OutputFormat::Csv,
            },
        },
    }
}

/// Cell-wise flux symmetry deviations of the mapped rate, reported in the
/// metadata sidecar whenever the flux is one of the sweep axes.
pub fn flux_symmetry_checks(config: &RunConfig) -> Result<Option<serde_json::Value>> {
    let sweep = match &config.sweep {
        Some(s) => *s,
        None => return Ok(None),
    };
    let phi_axis = if sweep.y.map(|y| y.axis) == Some(Axis::Phi) {
        sweep.y.unwrap()
    } else if sweep.x.axis == Axis::Phi {
        sweep.x
    } else {
        return Ok(None);
    };
    let preparation: Preparation = config.preparation.to_preparation();
    let method = config.methods[0];
    let tau = config.schedule.interval;

    let mut period_dev = 0.0f64;
    let mut reflection_dev = 0.0f64;
    for phi in phi_axis.values() {
        let base = crate::zeno::rate_for(&config.system.with_flux(phi), preparation, method, tau)?;
        let shifted = crate::zeno::rate_for(
            &config.system.with_flux(phi + 1.0),
            preparation,
            method,
            tau,
        )?;
        let mirrored =
            crate::zeno::rate_for(&config.system.with_flux(-phi), preparation, method, tau)?;
        period_dev = period_dev.max((base - shifted).abs());
        reflection_dev = reflection_dev.max((base - mirrored).abs());
    }
    Ok(Some(json!({
        "flux_period_max_abs_dev": period_dev,
        "flux_reflection_max_abs_dev": reflection_dev,
        "tolerance": 1e-10,
        "passed": period_dev <= 1e-10 && reflection_dev <= 1e-10,
    })))
}

/// Preparation for fig5 needs a concrete alpha when sweeping coherent cells.
pub fn preset_alpha(config: &RunConfig) -> Option<Complex64> {
    match config.preparation {
        PreparationConfig::Coherent { re, im } => Some(Complex64::new(re, im)),
        _ => None,
    }
}
