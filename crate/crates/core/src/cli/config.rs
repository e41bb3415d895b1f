//! Run configuration: a single JSON document, overridable field by field from
//! the command line. Precedence is flags > file > built-in defaults, and the
//! fully resolved configuration is embedded in every output file so no
//! ambient default stays hidden from the record.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{MeasurementSchedule, Preparation};
use crate::error::{Error, Result};
use crate::model::{Statistics, SystemParams};
use crate::rates::RateMethod;
use crate::zeno::AxisSpec;

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemParams,
    pub schedule: MeasurementSchedule,
    pub preparation: PreparationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    pub methods: Vec<RateMethod>,
    pub output: OutputConfig,
}

/// Initial-state selection as it appears in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PreparationConfig {
    Fermion,
    Fock { n: usize },
    Coherent { re: f64, im: f64 },
}

impl PreparationConfig {
    pub fn to_preparation(self) -> Preparation {
        match self {
            PreparationConfig::Fermion => Preparation::Fermion,
            PreparationConfig::Fock { n } => Preparation::Fock(n),
            PreparationConfig::Coherent { re, im } => Preparation::Coherent(Complex64::new(re, im)),
        }
    }
}

/// Sweep axes: `rate` consumes a 1-D interval sweep (x only), the phase-map
/// commands need both axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub x: AxisSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<AxisSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: String,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::argument(format!("unknown output format '{other}'"))),
        }
    }
}

/// Partial configuration as read from a file; every field optional, unknown
/// keys rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub system: Option<FileSystemConfig>,
    pub schedule: Option<FileScheduleConfig>,
    pub preparation: Option<PreparationConfig>,
    pub sweep: Option<SweepConfig>,
    pub methods: Option<Vec<RateMethod>>,
    pub output: Option<FileOutputConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSystemConfig {
    pub half_count: Option<usize>,
    pub hopping: Option<f64>,
    pub coupling: Option<f64>,
    pub onsite: Option<f64>,
    pub flux: Option<f64>,
    pub statistics: Option<Statistics>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileScheduleConfig {
    pub tau: Option<f64>,
    pub repetitions: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOutputConfig {
    pub path: Option<String>,
    pub format: Option<OutputFormat>,
}

/// Command-line overrides, highest precedence.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub half_count: Option<usize>,
    pub hopping: Option<f64>,
    pub coupling: Option<f64>,
    pub onsite: Option<f64>,
    pub flux: Option<f64>,
    pub statistics: Option<Statistics>,
    pub tau: Option<f64>,
    pub repetitions: Option<usize>,
    pub preparation: Option<PreparationConfig>,
    pub methods: Option<Vec<RateMethod>>,
    pub output: Option<String>,
    pub format: Option<OutputFormat>,
}

/// Built-in defaults: the standard 40-site ring at unit coupling.
fn defaults(default_output: &str) -> RunConfig {
    RunConfig {
        system: SystemParams {
            half_count: 20,
            hopping: 5.0,
            coupling: 1.0,
            onsite: 0.0,
            flux: 0.0,
            statistics: Statistics::Fermion,
        },
        schedule: MeasurementSchedule {
            interval: 2.0,
            repetitions: 50,
        },
        preparation: PreparationConfig::Fermion,
        sweep: None,
        methods: vec![RateMethod::TimeIntegral, RateMethod::PaperSinc],
        output: OutputConfig {
            path: default_output.to_string(),
            format: OutputFormat::Csv,
        },
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::argument(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::argument(format!("bad config {}: {e}", path.display())))
}

/// Resolves defaults, file and flags into one validated configuration.
pub fn resolve(
    file: Option<FileConfig>,
    overrides: &Overrides,
    default_output: &str,
) -> Result<RunConfig> {
    let mut config = defaults(default_output);

    if let Some(file) = file {
        if let Some(system) = file.system {
            if let Some(v) = system.half_count {
                config.system.half_count = v;
            }
            if let Some(v) = system.hopping {
                config.system.hopping = v;
            }
            if let Some(v) = system.coupling {
                config.system.coupling = v;
            }
            if let Some(v) = system.onsite {
                config.system.onsite = v;
            }
            if let Some(v) = system.flux {
                config.system.flux = v;
            }
            if let Some(v) = system.statistics {
                config.system.statistics = v;
            }
        }
        if let Some(schedule) = file.schedule {
            if let Some(v) = schedule.tau {
                config.schedule.interval = v;
            }
            if let Some(v) = schedule.repetitions {
                config.schedule.repetitions = v;
            }
        }
        if let Some(v) = file.preparation {
            config.preparation = v;
        }
        if let Some(v) = file.sweep {
            config.sweep = Some(v);
        }
        if let Some(v) = file.methods {
            config.methods = v;
        }
        if let Some(output) = file.output {
            if let Some(v) = output.path {
                config.output.path = v;
            }
            if let Some(v) = output.format {
                config.output.format = v;
            }
        }
    }

    if let Some(v) = overrides.half_count {
        config.system.half_count = v;
    }
    if let Some(v) = overrides.hopping {
        config.system.hopping = v;
    }
    if let Some(v) = overrides.coupling {
        config.system.coupling = v;
    }
    if let Some(v) = overrides.onsite {
        config.system.onsite = v;
    }
    if let Some(v) = overrides.flux {
        config.system.flux = v;
    }
    if let Some(v) = overrides.statistics {
        config.system.statistics = v;
    }
    if let Some(v) = overrides.tau {
        config.schedule.interval = v;
    }
    if let Some(v) = overrides.repetitions {
        config.schedule.repetitions = v;
    }
    if let Some(v) = overrides.preparation {
        config.preparation = v;
    }
    if let Some(v) = &overrides.methods {
        config.methods = v.clone();
    }
    if let Some(v) = &overrides.output {
        config.output.path = v.clone();
    }
    if let Some(v) = overrides.format {
        config.output.format = v;
    }

    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Checks every module precondition reachable from this config before any
    /// work starts.
    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.schedule.validate()?;
        match self.preparation {
            PreparationConfig::Fock { n } => {
                if n == 0 {
                    return Err(Error::argument("fock occupation must be at least 1"));
                }
                if self.system.statistics != Statistics::Boson {
                    return Err(Error::argument(
                        "fock preparation requires boson statistics",
                    ));
                }
            }
            PreparationConfig::Coherent { re, im } => {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(Error::argument("coherent amplitude must be finite"));
                }
                if self.system.statistics != Statistics::Boson {
                    return Err(Error::argument(
                        "coherent preparation requires boson statistics",
                    ));
                }
            }
            PreparationConfig::Fermion => {}
        }
        if let Some(sweep) = &self.sweep {
            sweep.x.validate()?;
            if let Some(y) = &sweep.y {
                y.validate()?;
            }
        }
        if self.methods.is_empty() {
            return Err(Error::argument("at least one rate method is required"));
        }
        if self.output.path.is_empty() {
            return Err(Error::argument("output path must not be empty"));
        }
        Ok(())
    }

    /// Canonical single-line JSON of the resolved configuration.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serialization cannot fail")
    }
}

/// Parses `fermion`, `fock:N` or `coherent:RE,IM`.
pub fn parse_preparation(s: &str) -> Result<PreparationConfig> {
    if s == "fermion" {
        return Ok(PreparationConfig::Fermion);
    }
    if let Some(rest) = s.strip_prefix("fock:") {
        let n = rest
            .parse::<usize>()
            .map_err(|_| Error::argument(format!("bad fock occupation '{rest}'")))?;
        return Ok(PreparationConfig::Fock { n });
    }
    if let Some(rest) = s.strip_prefix("coherent:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::argument(
                "coherent preparation needs 're,im', e.g. coherent:0.1,0.0",
            ));
        }
        let re = parts[0]
            .parse::<f64>()
            .map_err(|_| Error::argument(format!("bad coherent amplitude '{rest}'")))?;
        let im = parts[1]
            .parse::<f64>()
            .map_err(|_| Error::argument(format!("bad coherent amplitude '{rest}'")))?;
        return Ok(PreparationConfig::Coherent { re, im });
    }
    Err(Error::argument(format!(
        "unknown preparation '{s}' (expected fermion, fock:N or coherent:RE,IM)"
    )))
}

pub fn parse_statistics(s: &str) -> Result<Statistics> {
    match s {
        "fermion" => Ok(Statistics::Fermion),
        "boson" => Ok(Statistics::Boson),
        other => Err(Error::argument(format!("unknown statistics '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let config = resolve(None, &Overrides::default(), "out.csv").unwrap();
        assert_eq!(config.system.half_count, 20);
        assert_eq!(config.output.path, "out.csv");
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad =
            serde_json::from_str::<FileConfig>(r#"{"system": {"half_count": 3}, "bogus": 1}"#);
        assert!(bad.is_err());
        let bad = serde_json::from_str::<FileConfig>(r#"{"system": {"half_cnt": 3}}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let file: FileConfig =
            serde_json::from_str(r#"{"system": {"hopping": 2.5}, "schedule": {"tau": 10.0}}"#)
                .unwrap();
        let overrides = Overrides {
            hopping: Some(7.0),
            ..Overrides::default()
        };
        let config = resolve(Some(file), &overrides, "out.csv").unwrap();
        assert_eq!(config.system.hopping, 7.0);
        assert_eq!(config.schedule.interval, 10.0);
        assert_eq!(config.system.coupling, 1.0);
    }

    #[test]
    fn preparation_statistics_cross_check() {
        let overrides = Overrides {
            preparation: Some(PreparationConfig::Fock { n: 2 }),
            ..Overrides::default()
        };
        assert!(resolve(None, &overrides, "out.csv").is_err());

        let overrides = Overrides {
            preparation: Some(PreparationConfig::Fock { n: 2 }),
            statistics: Some(Statistics::Boson),
            flux: Some(0.0),
            ..Overrides::default()
        };
        assert!(resolve(None, &overrides, "out.csv").is_ok());
    }

    #[test]
    fn preparation_strings() {
        assert_eq!(
            parse_preparation("fermion").unwrap(),
            PreparationConfig::Fermion
        );
        assert_eq!(
            parse_preparation("fock:4").unwrap(),
            PreparationConfig::Fock { n: 4 }
        );
        assert_eq!(
            parse_preparation("coherent:0.1,-0.2").unwrap(),
            PreparationConfig::Coherent { re: 0.1, im: -0.2 }
        );
        assert!(parse_preparation("squeezed:1").is_err());
    }
}
