//! Expectation, Value-at-Risk and Average Value-at-Risk on empirical loss
//! samples.
//!
//! The slice helpers at the bottom take plain losses ordered by scenario
//! index; position stands in for the index when breaking ties.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;

use super::loss::{LossConfig, LossSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Mean loss at most the threshold.
    Expectation,
    /// Probability of exceeding the threshold strictly below the confidence level.
    #[serde(rename = "var")]
    ValueAtRisk,
    /// Mean of the worst confidence-fraction of losses at most the threshold.
    #[serde(rename = "avar")]
    AverageValueAtRisk,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Expectation, Criterion::ValueAtRisk, Criterion::AverageValueAtRisk];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Expectation => "expectation",
            Criterion::ValueAtRisk => "var",
            Criterion::AverageValueAtRisk => "avar",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "expectation" => Ok(Criterion::Expectation),
            "var" => Ok(Criterion::ValueAtRisk),
            "avar" => Ok(Criterion::AverageValueAtRisk),
            other => Err(Error::Input(format!("unknown criterion `{other}`"))),
        }
    }
}

fn ordered_losses(samples: &[LossSample]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Input("no loss samples".into()));
    }
    let mut sorted: Vec<&LossSample> = samples.iter().collect();
    sorted.sort_by_key(|s| s.scenario_index);
    Ok(sorted.iter().map(|s| s.real_economy_loss.0).collect())
}

pub fn expected_loss(samples: &[LossSample]) -> Result<Money> {
    Ok(Money(mean(&ordered_losses(samples)?)))
}

/// Fraction of samples strictly above `threshold`.
pub fn exceedance_probability(samples: &[LossSample], threshold: Money) -> Result<f64> {
    Ok(exceedance(&ordered_losses(samples)?, threshold.0))
}

/// Mean of the worst `⌈confidence × N⌉` samples.
pub fn average_var(samples: &[LossSample], confidence: f64) -> Result<Money> {
    check_confidence(confidence)?;
    Ok(Money(worst_mean(&ordered_losses(samples)?, confidence)))
}

/// Empirical `level`-quantile: the `⌈level × N⌉`-th smallest loss.
pub fn quantile(samples: &[LossSample], level: f64) -> Result<Money> {
    if !(0.0..=1.0).contains(&level) {
        return Err(Error::Domain(format!("quantile level must lie in [0, 1], got {level}")));
    }
    Ok(Money(empirical_quantile(&ordered_losses(samples)?, level)))
}

pub fn criterion_satisfied(samples: &[LossSample], criterion: Criterion, config: &LossConfig) -> Result<bool> {
    check_confidence(config.confidence)?;
    Ok(satisfied(&ordered_losses(samples)?, criterion, config))
}

fn check_confidence(confidence: f64) -> Result<()> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    Ok(())
}

pub(crate) fn satisfied(losses: &[f64], criterion: Criterion, config: &LossConfig) -> bool {
    let threshold = config.threshold().0;
    match criterion {
        Criterion::Expectation => mean(losses) <= threshold,
        Criterion::ValueAtRisk => exceedance(losses, threshold) < config.confidence,
        Criterion::AverageValueAtRisk => worst_mean(losses, config.confidence) <= threshold,
    }
}

pub(crate) fn mean(losses: &[f64]) -> f64 {
    losses.iter().sum::<f64>() / losses.len() as f64
}

pub(crate) fn exceedance(losses: &[f64], threshold: f64) -> f64 {
    losses.iter().filter(|&&l| l > threshold).count() as f64 / losses.len() as f64
}

fn tail_count(n: usize, confidence: f64) -> usize {
    // Guard against 0.1 * 20 landing a hair above 2.
    let raw = confidence * n as f64;
    let k = (raw - 1e-9 * raw.max(1.0)).ceil() as usize;
    k.clamp(1, n)
}

pub(crate) fn worst_mean(losses: &[f64], confidence: f64) -> f64 {
    let k = tail_count(losses.len(), confidence);
    let mut order: Vec<usize> = (0..losses.len()).collect();
    // Largest first; equal losses keep scenario order.
    order.sort_by(|&a, &b| losses[b].total_cmp(&losses[a]).then(a.cmp(&b)));
    order[..k].iter().map(|&i| losses[i]).sum::<f64>() / k as f64
}

pub(crate) fn empirical_quantile(losses: &[f64], level: f64) -> f64 {
    let mut sorted = losses.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let rank = tail_count(n, level.max(f64::MIN_POSITIVE));
    sorted[rank - 1]
}
