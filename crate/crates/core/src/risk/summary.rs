use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;
use crate::network::GalacticNetwork;

use super::loss::{green_line_loss, LossConfig, LossSample};
use super::measures::{empirical_quantile, exceedance, mean, worst_mean};

/// Headline statistics of one loss distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossSummary {
    pub n_scenarios: usize,
    pub green_line: Money,
    pub mean_loss: Money,
    pub median_loss: Money,
    pub quantile_90: Money,
    pub quantile_95: Money,
    pub quantile_99: Money,
    /// Empirical `(1 − confidence)`-quantile.
    pub value_at_risk: Money,
    pub average_var: Money,
    /// Probability of a loss strictly above `threshold_fraction × GGP`.
    pub exceedance_probability: f64,
    pub fraction_below_green_line: f64,
    pub mean_defaults: f64,
    pub central_default_fraction: f64,
    /// Median share of Massive and Big banks in default, over scenarios at
    /// or above the green line. `NaN` when there are none.
    pub median_systemic_default_fraction_above_green_line: f64,
    pub mean_insurance_payout: Money,
    pub mean_payout_below_green_line: Money,
    pub mean_payout_above_green_line: Money,
}

impl LossSummary {
    /// `samples` hold the losses being summarized. `classify_by`, when
    /// given, decides which scenarios count as below the green line for the
    /// conditional payout means; otherwise `samples` decide.
    pub fn new(
        samples: &[LossSample],
        classify_by: Option<&[LossSample]>,
        network: &GalacticNetwork,
        config: &LossConfig,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Input("no loss samples".into()));
        }
        let reference = classify_by.unwrap_or(samples);
        if reference.len() != samples.len() {
            return Err(Error::Input("classification samples do not match".into()));
        }
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by_key(|&i| samples[i].scenario_index);
        let losses: Vec<f64> = order.iter().map(|&i| samples[i].real_economy_loss.0).collect();
        let green = green_line_loss(network, config);
        let n = samples.len() as f64;

        let below = |s: &LossSample| s.real_economy_loss.0 < green.0;
        let mut above_fractions: Vec<f64> = reference
            .iter()
            .zip(samples)
            .filter(|(r, _)| !below(r))
            .map(|(_, s)| s.systemic_default_fraction(network))
            .collect();
        above_fractions.sort_unstable_by(f64::total_cmp);
        let median_above = if above_fractions.is_empty() {
            f64::NAN
        } else {
            empirical_quantile(&above_fractions, 0.5)
        };

        let conditional_payout = |want_below: bool| {
            let picked: Vec<f64> = reference
                .iter()
                .zip(samples)
                .filter(|(r, _)| below(r) == want_below)
                .map(|(_, s)| s.insurance_payout.0)
                .collect();
            if picked.is_empty() {
                Money(f64::NAN)
            } else {
                Money(mean(&picked))
            }
        };

        Ok(LossSummary {
            n_scenarios: samples.len(),
            green_line: green,
            mean_loss: Money(mean(&losses)),
            median_loss: Money(empirical_quantile(&losses, 0.5)),
            quantile_90: Money(empirical_quantile(&losses, 0.9)),
            quantile_95: Money(empirical_quantile(&losses, 0.95)),
            quantile_99: Money(empirical_quantile(&losses, 0.99)),
            value_at_risk: Money(empirical_quantile(&losses, 1.0 - config.confidence)),
            average_var: Money(worst_mean(&losses, config.confidence)),
            exceedance_probability: exceedance(&losses, config.threshold().0),
            fraction_below_green_line: reference.iter().filter(|s| below(s)).count() as f64 / n,
            mean_defaults: samples.iter().map(|s| s.n_defaults as f64).sum::<f64>() / n,
            central_default_fraction: samples.iter().filter(|s| s.tier_defaults[0] > 0).count() as f64 / n,
            median_systemic_default_fraction_above_green_line: median_above,
            mean_insurance_payout: Money(samples.iter().map(|s| s.insurance_payout.0).sum::<f64>() / n),
            mean_payout_below_green_line: conditional_payout(true),
            mean_payout_above_green_line: conditional_payout(false),
        })
    }
}
