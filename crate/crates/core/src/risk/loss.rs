use serde::{Deserialize, Serialize};

use crate::clearing::{ClearingOutcome, TierClearing};
use crate::error::{Error, Result};
use crate::money::Money;
use crate::network::{BankTier, GalacticNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    pub deposit_insurance: bool,
    pub ggp: Money,
    pub threshold_fraction: f64,
    pub confidence: f64,
    /// Fraction of face value the sovereign bonds still pay.
    pub bond_recovery: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig {
            deposit_insurance: false,
            ggp: Money(6090.0),
            threshold_fraction: 0.01,
            confidence: 0.10,
            bond_recovery: 0.0,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction <= 1.0) {
            return Err(Error::Domain(format!("threshold_fraction must lie in (0, 1], got {}", self.threshold_fraction)));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Domain(format!("confidence must lie in (0, 1), got {}", self.confidence)));
        }
        if !(0.0..=1.0).contains(&self.bond_recovery) {
            return Err(Error::Domain(format!("bond_recovery must lie in [0, 1], got {}", self.bond_recovery)));
        }
        if !(self.ggp.0 > 0.0) {
            return Err(Error::Domain(format!("ggp must be positive, got {}", self.ggp)));
        }
        Ok(())
    }

    /// Loss level the criteria compare against.
    pub fn threshold(&self) -> Money {
        self.ggp * self.threshold_fraction
    }
}

/// Cash handed to every Massive and every Big bank before clearing. The
/// central bank never receives anything.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BailoutAllocation {
    per_massive: Money,
    per_big: Money,
}

impl BailoutAllocation {
    pub const NONE: BailoutAllocation = BailoutAllocation { per_massive: Money::ZERO, per_big: Money::ZERO };

    pub fn new(per_massive: Money, per_big: Money) -> Result<Self> {
        for (name, m) in [("per_massive", per_massive), ("per_big", per_big)] {
            if !(m.0 >= 0.0) || !m.0.is_finite() {
                return Err(Error::Domain(format!("{name} bailout must be finite and non-negative, got {m}")));
            }
        }
        Ok(BailoutAllocation { per_massive, per_big })
    }

    pub fn per_massive(&self) -> Money {
        self.per_massive
    }

    pub fn per_big(&self) -> Money {
        self.per_big
    }

    pub fn per_central(&self) -> Money {
        Money::ZERO
    }

    /// Per-bank injection by tier index.
    pub fn shifts(&self) -> [f64; 3] {
        [0.0, self.per_massive.0, self.per_big.0]
    }

    pub fn total(&self, network: &GalacticNetwork) -> Money {
        let counts = network.counts();
        self.per_massive * counts.massive as f64 + self.per_big * counts.big as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LossSample {
    pub scenario_index: u64,
    pub real_economy_loss: Money,
    pub insurance_payout: Money,
    pub n_defaults: usize,
    /// Unpaid part of the obligations to the outside economy.
    pub central_shortfall: Money,
    /// Defaults by tier: central, massive, big.
    pub tier_defaults: [usize; 3],
}

impl LossSample {
    /// Share of Massive and Big banks that defaulted.
    pub fn systemic_default_fraction(&self, network: &GalacticNetwork) -> f64 {
        let counts = network.counts();
        (self.tier_defaults[1] + self.tier_defaults[2]) as f64 / (counts.massive + counts.big) as f64
    }
}

/// Accounting shared by the per-bank and tier-level clearing results.
pub fn loss_from_tiers(
    scenario_index: u64,
    tier_defaults: [usize; 3],
    external_paid: Money,
    network: &GalacticNetwork,
    config: &LossConfig,
) -> LossSample {
    let counts = network.counts();
    let owed: Money = BankTier::ALL
        .iter()
        .map(|&t| network.profile(t).owed_external * counts.get(t) as f64)
        .sum();
    let central_shortfall = (owed - external_paid).max(Money::ZERO);
    let deposits_lost: Money = BankTier::ALL
        .iter()
        .map(|&t| network.deposits(t) * tier_defaults[t.index()] as f64)
        .sum();
    let (real_economy_loss, insurance_payout) = if config.deposit_insurance {
        (central_shortfall, deposits_lost)
    } else {
        (central_shortfall + deposits_lost, Money::ZERO)
    };
    LossSample {
        scenario_index,
        real_economy_loss,
        insurance_payout,
        n_defaults: tier_defaults.iter().sum(),
        central_shortfall,
        tier_defaults,
    }
}

/// Loss to the outside economy: the unpaid external obligation, plus the
/// deposits of every defaulted bank unless deposits are insured, in which
/// case they show up as insurance payout instead.
pub fn real_economy_loss(
    outcome: &ClearingOutcome,
    network: &GalacticNetwork,
    config: &LossConfig,
    scenario_index: u64,
) -> Result<LossSample> {
    if outcome.defaulted.len() != network.n_banks() {
        return Err(Error::Input(format!(
            "clearing outcome has {} banks, network has {}",
            outcome.defaulted.len(),
            network.n_banks()
        )));
    }
    let mut tier_defaults = [0; 3];
    for tier in BankTier::ALL {
        tier_defaults[tier.index()] = outcome.defaulted[network.bank_range(tier)].iter().filter(|&&d| d).count();
    }
    Ok(loss_from_tiers(scenario_index, tier_defaults, outcome.external_paid, network, config))
}

impl TierClearing {
    pub fn loss_sample(&self, scenario_index: u64, network: &GalacticNetwork, config: &LossConfig) -> LossSample {
        loss_from_tiers(scenario_index, self.defaults, self.external_paid, network, config)
    }
}

/// Loss if the public held the sovereign debt directly, with no banks in
/// between.
pub fn green_line_loss(network: &GalacticNetwork, config: &LossConfig) -> Money {
    network.outstanding_debt() * (1.0 - config.bond_recovery)
}
