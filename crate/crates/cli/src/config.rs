//! JSON run configuration.
//!
//! Every block is optional and every field has a default, so `{}` is a
//! complete configuration for the headline run. Unknown fields are
//! rejected; errors carry the JSON path and the line/column.

use std::path::{Path, PathBuf};

use galaxy_contagion::calibration::{build_network, CalibrationParams};
use galaxy_contagion::network::GalacticNetwork;
use galaxy_contagion::risk::{FrontierSettings, LossConfig};
use galaxy_contagion::shock::ShockParams;
use galaxy_contagion::Money;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 19_830_525;
pub const DEFAULT_SCENARIOS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossBlock {
    pub deposit_insurance: bool,
    /// Falls back to the calibrated GGP.
    pub ggp: Option<Money>,
    pub threshold_fraction: f64,
    pub confidence: f64,
    pub bond_recovery: f64,
}

impl Default for LossBlock {
    fn default() -> Self {
        let d = LossConfig::default();
        LossBlock {
            deposit_insurance: d.deposit_insurance,
            ggp: None,
            threshold_fraction: d.threshold_fraction,
            confidence: d.confidence,
            bond_recovery: d.bond_recovery,
        }
    }
}

/// Per-Big bailout values: an explicit list, or `start..=stop` by `step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub values: Option<Vec<Money>>,
    pub start: Money,
    pub stop: Money,
    pub step: Money,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { values: None, start: Money(0.0), stop: Money(0.5), step: Money(0.005) }
    }
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<Money>, CliError> {
        if let Some(values) = &self.values {
            if values.is_empty() {
                return Err(CliError::Config("grid.values is empty".into()));
            }
            if values.windows(2).any(|w| !(w[0].0 < w[1].0)) || values[0].0 < 0.0 {
                return Err(CliError::Config("grid.values must be non-negative and strictly increasing".into()));
            }
            return Ok(values.clone());
        }
        let (start, stop, step) = (self.start.0, self.stop.0, self.step.0);
        if !(step > 0.0) || !(start >= 0.0) || !(stop >= start) {
            return Err(CliError::Config(format!(
                "grid range needs 0 <= start <= stop and step > 0, got start {start}, stop {stop}, step {step}"
            )));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| Money(start + i as f64 * step)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub calibration: CalibrationParams,
    pub shock: ShockParams,
    pub loss: LossBlock,
    pub n_scenarios: usize,
    pub seed: u64,
    pub grid: GridSpec,
    pub frontier: FrontierSettings,
    pub histogram_bins: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            calibration: CalibrationParams::default(),
            shock: ShockParams::default(),
            loss: LossBlock::default(),
            n_scenarios: DEFAULT_SCENARIOS,
            seed: DEFAULT_SEED,
            grid: GridSpec::default(),
            frontier: FrontierSettings::default(),
            histogram_bins: 100,
            output_dir: PathBuf::from("runs"),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|err| {
            let path = err.path().to_string();
            let inner = err.into_inner();
            CliError::Config(format!("at `{path}` (line {}, column {}): {inner}", inner.line(), inner.column()))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let model = |e: galaxy_contagion::Error| CliError::Config(e.to_string());
        self.calibration.validate().map_err(model)?;
        self.shock.validate().map_err(model)?;
        self.loss_config().validate().map_err(model)?;
        if self.n_scenarios == 0 {
            return Err(CliError::Config("n_scenarios must be at least 1".into()));
        }
        if self.histogram_bins == 0 {
            return Err(CliError::Config("histogram_bins must be at least 1".into()));
        }
        if !(self.frontier.resolution.0 > 0.0) || !(self.frontier.max_per_massive.0 >= 0.0) {
            return Err(CliError::Config("frontier needs resolution > 0 and max_per_massive >= 0".into()));
        }
        self.grid.points()?;
        Ok(())
    }

    pub fn loss_config(&self) -> LossConfig {
        LossConfig {
            deposit_insurance: self.loss.deposit_insurance,
            ggp: self.loss.ggp.unwrap_or(self.calibration.ggp_endor),
            threshold_fraction: self.loss.threshold_fraction,
            confidence: self.loss.confidence,
            bond_recovery: self.loss.bond_recovery,
        }
    }

    pub fn network(&self) -> Result<GalacticNetwork, CliError> {
        build_network(&self.calibration).map_err(|e| CliError::Config(e.to_string()))
    }
}
