//! Sweeps of a scenario over a decreasing list of lattice spacings.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nclock::energy::{rescaled_energy, vortex_cost};
use nclock::vorticity::{flat_distance, vorticity_measure};
use nclock::DiscreteCircle;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::{save_field, IoError};
use crate::scenario::{Overrides, Scenario, ThetaRule};

pub const CSV_COLUMNS: [&str; 9] = [
    "epsilon",
    "theta",
    "regime_tag",
    "rescaled_energy",
    "excess_energy",
    "M",
    "total_vorticity",
    "flat_distance",
    "seconds",
];

/// Cell written in place of measurements of a failed row.
pub const MISSING: &str = "NA";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("epsilon_list is empty")]
    EmptyEpsilonList,
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Field(#[from] IoError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub epsilon_list: Vec<f64>,
    pub theta_rule: ThetaRule,
    pub scenario: Scenario,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub c0: Option<f64>,
    /// CSV destination; the caller decides what to do when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Directory receiving one field file per successful row.
    #[serde(default)]
    pub field_dir: Option<PathBuf>,
}

impl SweepConfig {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            lambda: self.lambda,
            eta: self.eta,
            c0: self.c0,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.epsilon_list.is_empty() {
            return Err(SweepError::EmptyEpsilonList);
        }
        for &e in &self.epsilon_list {
            if !(e > 0.0 && e.is_finite()) {
                return Err(SweepError::InvalidConfig(format!("epsilon must be positive, got {e}")));
            }
            let t = self.theta_rule.theta(e);
            if !(t > 0.0 && t < std::f64::consts::PI) {
                return Err(SweepError::InvalidConfig(format!("theta {t} at epsilon {e} is outside (0, pi)")));
            }
        }
        if let Some(w) = self.epsilon_list.windows(2).find(|w| w[1] >= w[0]) {
            return Err(SweepError::InvalidConfig(format!(
                "epsilon_list must be strictly decreasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurements {
    pub rescaled_energy: f64,
    pub excess_energy: f64,
    pub total_vorticity: i64,
    pub flat_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub epsilon: f64,
    /// Realized angle `2 pi / N`.
    pub theta: f64,
    pub regime_tag: String,
    pub vortices: u32,
    pub seconds: f64,
    /// Construction failures are kept as the error message.
    pub outcome: Result<Measurements, String>,
    pub field_path: Option<PathBuf>,
}

impl SweepRecord {
    pub fn failed(&self) -> bool {
        self.outcome.is_err()
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>, SweepError> {
    config.validate()?;
    if let Some(dir) = &config.field_dir {
        std::fs::create_dir_all(dir).map_err(IoError::from)?;
    }
    let overrides = config.overrides();
    let tag = config.theta_rule.tag();
    let mut out = Vec::with_capacity(config.epsilon_list.len());
    for (row, &eps) in config.epsilon_list.iter().enumerate() {
        let start = Instant::now();
        let target_theta = config.theta_rule.theta(eps);
        let circle = DiscreteCircle::from_theta(target_theta);
        let theta = circle.as_ref().map_or(target_theta, |c| c.theta());
        let vortices = match &config.scenario {
            Scenario::Vortex { signs } => signs.len() as u32,
            Scenario::Interface { .. } => 0,
            Scenario::Combined => 1,
        };
        let mut field_path = None;
        let outcome = match circle.and_then(|c| config.scenario.realize(eps, c, &overrides)) {
            Ok(r) => {
                let rescaled = rescaled_energy(&r.field, theta, None);
                let mu = vorticity_measure(&r.field);
                let m = Measurements {
                    rescaled_energy: rescaled,
                    excess_energy: rescaled - vortex_cost(eps, theta, r.vortices),
                    total_vorticity: mu.total_charge(),
                    flat_distance: flat_distance(&mu, &r.target, r.field.domain().shape()),
                };
                if let Some(dir) = &config.field_dir {
                    let p = dir.join(format!("field_{row:03}.nclk"));
                    save_field(&r.field, &p)?;
                    field_path = Some(p);
                }
                Ok(m)
            }
            Err(e) => Err(e.to_string()),
        };
        out.push(SweepRecord {
            epsilon: eps,
            theta,
            regime_tag: tag.clone(),
            vortices,
            seconds: start.elapsed().as_secs_f64(),
            outcome,
            field_path,
        });
    }
    Ok(out)
}

/// Whether the `seconds` column carries wall-clock times. Without them the
/// CSV depends only on the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Record,
    Omit,
}

pub fn write_csv<W: Write>(records: &[SweepRecord], timing: Timing, w: W) -> Result<(), SweepError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in records {
        let seconds = match timing {
            Timing::Record => r.seconds.to_string(),
            Timing::Omit => String::new(),
        };
        let (rescaled, excess, vort, flat) = match &r.outcome {
            Ok(m) => (
                m.rescaled_energy.to_string(),
                m.excess_energy.to_string(),
                m.total_vorticity.to_string(),
                m.flat_distance.to_string(),
            ),
            Err(_) => (MISSING.into(), MISSING.into(), MISSING.into(), MISSING.into()),
        };
        out.write_record([
            r.epsilon.to_string(),
            r.theta.to_string(),
            r.regime_tag.clone(),
            rescaled,
            excess,
            r.vortices.to_string(),
            vort,
            flat,
            seconds,
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv_file(records: &[SweepRecord], timing: Timing, path: &Path) -> Result<(), SweepError> {
    let f = std::fs::File::create(path).map_err(IoError::from)?;
    write_csv(records, timing, std::io::BufWriter::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(list: Vec<f64>) -> SweepConfig {
        SweepConfig {
            epsilon_list: list,
            theta_rule: ThetaRule::Proportional { c: 10.0 },
            scenario: Scenario::Vortex { signs: vec![1] },
            lambda: None,
            eta: None,
            c0: None,
            output: None,
            field_dir: None,
        }
    }

    #[test]
    fn empty_list_is_an_error() {
        assert!(matches!(run_sweep(&config(vec![])), Err(SweepError::EmptyEpsilonList)));
    }

    #[test]
    fn list_must_decrease() {
        assert!(matches!(config(vec![0.1, 0.1]).validate(), Err(SweepError::InvalidConfig(_))));
        assert!(matches!(config(vec![0.05, 0.1]).validate(), Err(SweepError::InvalidConfig(_))));
        let mut c = config(vec![0.5]);
        c.theta_rule = ThetaRule::Fixed { value: 4.0 };
        assert!(matches!(c.validate(), Err(SweepError::InvalidConfig(_))));
    }

    #[test]
    fn failed_rows_are_kept() {
        let mut c = config(vec![1.0 / 32.0, 1.0 / 64.0]);
        c.scenario = Scenario::Combined;
        c.theta_rule = ThetaRule::Fixed { value: 0.2 };
        c.lambda = Some(0.3);
        let rows = run_sweep(&c).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(SweepRecord::failed));
        let mut buf = Vec::new();
        write_csv(&rows, Timing::Omit, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert!(text.lines().nth(1).unwrap().contains(",NA,NA,1,NA,NA,"));
    }

    #[test]
    fn saved_fields_reproduce_recorded_energy() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(vec![1.0 / 32.0, 1.0 / 64.0]);
        c.scenario = Scenario::Interface {
            jump: std::f64::consts::FRAC_PI_2,
            length: 0.5,
        };
        c.field_dir = Some(dir.path().to_path_buf());
        let rows = run_sweep(&c).unwrap();
        for r in &rows {
            let m = r.outcome.as_ref().unwrap();
            let f = crate::io::load_field(r.field_path.as_ref().unwrap()).unwrap();
            assert_eq!(f.circle().theta(), r.theta);
            assert_eq!(rescaled_energy(&f, r.theta, None), m.rescaled_energy);
            assert!(m.rescaled_energy.is_finite() && m.flat_distance.is_finite());
        }
    }

    #[test]
    fn csv_without_timings_is_reproducible() {
        let c = config(vec![1.0 / 16.0, 1.0 / 32.0]);
        let csv = || {
            let mut buf = Vec::new();
            write_csv(&run_sweep(&c).unwrap(), Timing::Omit, &mut buf).unwrap();
            buf
        };
        assert_eq!(csv(), csv());
    }
}
