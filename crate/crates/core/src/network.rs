//! Tiered interbank network and the balance-sheet identities shared by the
//! clearing and loss code.
//!
//! Banks come in three tiers and every bank of a tier is identical at
//! construction. Amounts in a [`LiabilityProfile`] are what ONE bank owes
//! to a WHOLE tier; the amount is split evenly over the creditors in that
//! tier, excluding the debtor itself for same-tier debts.
//!
//! Global bank indices run Central first, then Massive, then Big.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;

/// Deposits are a quarter of total assets.
pub const ASSETS_PER_DEPOSIT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BankTier {
    Central,
    Massive,
    Big,
}

impl BankTier {
    pub const ALL: [BankTier; 3] = [BankTier::Central, BankTier::Massive, BankTier::Big];

    pub const fn index(self) -> usize {
        match self {
            BankTier::Central => 0,
            BankTier::Massive => 1,
            BankTier::Big => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            BankTier::Central => "central",
            BankTier::Massive => "massive",
            BankTier::Big => "big",
        }
    }
}

impl fmt::Display for BankTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierCounts {
    pub central: usize,
    pub massive: usize,
    pub big: usize,
}

impl Default for TierCounts {
    fn default() -> Self {
        TierCounts { central: 1, massive: 175, big: 17_325 }
    }
}

impl TierCounts {
    pub const fn new(central: usize, massive: usize, big: usize) -> Self {
        TierCounts { central, massive, big }
    }

    pub fn get(&self, tier: BankTier) -> usize {
        match tier {
            BankTier::Central => self.central,
            BankTier::Massive => self.massive,
            BankTier::Big => self.big,
        }
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.central, self.massive, self.big]
    }

    pub fn total(&self) -> usize {
        self.central + self.massive + self.big
    }
}

/// What one bank of a tier owes, by creditor group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiabilityProfile {
    #[serde(default)]
    pub owed_to_central: Money,
    #[serde(default)]
    pub owed_to_massive: Money,
    #[serde(default)]
    pub owed_to_big: Money,
    #[serde(default)]
    pub owed_external: Money,
}

impl LiabilityProfile {
    pub const fn new(central: f64, massive: f64, big: f64, external: f64) -> Self {
        LiabilityProfile {
            owed_to_central: Money(central),
            owed_to_massive: Money(massive),
            owed_to_big: Money(big),
            owed_external: Money(external),
        }
    }

    pub fn owed_to(&self, tier: BankTier) -> Money {
        match tier {
            BankTier::Central => self.owed_to_central,
            BankTier::Massive => self.owed_to_massive,
            BankTier::Big => self.owed_to_big,
        }
    }

    /// Obligations to other banks, i.e. everything but the external part.
    pub fn interbank(&self) -> Money {
        self.owed_to_central + self.owed_to_massive + self.owed_to_big
    }

    pub fn total_obligation(&self) -> Money {
        total_obligation(self)
    }

    fn fields(&self) -> [Money; 4] {
        [self.owed_to_central, self.owed_to_massive, self.owed_to_big, self.owed_external]
    }
}

/// Sum of the four owed fields.
pub fn total_obligation(profile: &LiabilityProfile) -> Money {
    profile.owed_to_central + profile.owed_to_massive + profile.owed_to_big + profile.owed_external
}

pub fn deposits_from_assets(total_assets: Money) -> Money {
    total_assets / ASSETS_PER_DEPOSIT
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BalanceSheet {
    pub external_assets: Money,
    pub interbank_claims_face: Money,
    pub bond_holdings_face: Money,
    pub deposits: Money,
    pub bailout_injection: Money,
}

impl BalanceSheet {
    pub fn total_assets(&self) -> Money {
        self.external_assets + self.interbank_claims_face + self.bond_holdings_face + self.bailout_injection
    }
}

/// Face value of the interbank claims one bank of `tier` holds.
///
/// Every debtor tier contributes `count × owed` to the tier, which is then
/// shared evenly by its members.
pub fn claims_face_per_bank(
    counts: &TierCounts,
    profiles: &[LiabilityProfile; 3],
    tier: BankTier,
) -> Result<Money> {
    let members = counts.get(tier);
    if members == 0 {
        return Err(Error::DegenerateNetwork(format!("{tier} tier has no banks")));
    }
    let inflow: Money = BankTier::ALL
        .iter()
        .map(|&debtor| profiles[debtor.index()].owed_to(tier) * counts.get(debtor) as f64)
        .sum();
    Ok(inflow / members as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalacticNetwork {
    counts: TierCounts,
    profiles: [LiabilityProfile; 3],
    sheets: [BalanceSheet; 3],
    ggp: Money,
    outstanding_debt: Money,
}

impl GalacticNetwork {
    /// Assembles a network from tier-level data. Claims and deposits are
    /// derived; external assets and bond holdings are taken as given.
    pub fn new(
        counts: TierCounts,
        profiles: [LiabilityProfile; 3],
        external_assets: [Money; 3],
        bond_holdings: [Money; 3],
        ggp: Money,
        outstanding_debt: Money,
    ) -> Result<Self> {
        for tier in BankTier::ALL {
            let i = tier.index();
            let count = counts.get(tier);
            if count == 0 {
                return Err(Error::DegenerateNetwork(format!("{tier} tier has no banks")));
            }
            let profile = &profiles[i];
            if profile.fields().iter().any(|m| !(m.0 >= 0.0) || !m.0.is_finite()) {
                return Err(Error::Domain(format!("{tier} liabilities must be finite and non-negative")));
            }
            if count == 1 && profile.owed_to(tier).0 > 0.0 {
                return Err(Error::DegenerateNetwork(format!(
                    "{tier} tier has a single bank but owes its own tier {}",
                    profile.owed_to(tier)
                )));
            }
            if tier != BankTier::Central && profile.owed_external.0 > 0.0 {
                return Err(Error::Input(format!("only the central tier may owe outside the network, {tier} owes {}", profile.owed_external)));
            }
            for (name, m) in [("external assets", external_assets[i]), ("bond holdings", bond_holdings[i])] {
                if !(m.0 >= 0.0) || !m.0.is_finite() {
                    return Err(Error::Domain(format!("{tier} {name} must be finite and non-negative, got {m}")));
                }
            }
        }
        if !(ggp.0 > 0.0) {
            return Err(Error::Domain(format!("GGP must be positive, got {ggp}")));
        }

        let mut sheets = [BalanceSheet::default(); 3];
        for tier in BankTier::ALL {
            let i = tier.index();
            let mut sheet = BalanceSheet {
                external_assets: external_assets[i],
                interbank_claims_face: claims_face_per_bank(&counts, &profiles, tier)?,
                bond_holdings_face: bond_holdings[i],
                deposits: Money::ZERO,
                bailout_injection: Money::ZERO,
            };
            sheet.deposits = deposits_from_assets(sheet.total_assets());
            sheets[i] = sheet;
        }
        Ok(GalacticNetwork { counts, profiles, sheets, ggp, outstanding_debt })
    }

    pub fn counts(&self) -> &TierCounts {
        &self.counts
    }

    pub fn n_banks(&self) -> usize {
        self.counts.total()
    }

    pub fn ggp(&self) -> Money {
        self.ggp
    }

    pub fn outstanding_debt(&self) -> Money {
        self.outstanding_debt
    }

    pub fn profile(&self, tier: BankTier) -> &LiabilityProfile {
        &self.profiles[tier.index()]
    }

    pub fn profiles(&self) -> &[LiabilityProfile; 3] {
        &self.profiles
    }

    /// The balance sheet shared by every bank of `tier`.
    pub fn tier_sheet(&self, tier: BankTier) -> &BalanceSheet {
        &self.sheets[tier.index()]
    }

    /// Balance sheet of bank `index` within `tier`.
    pub fn sheet(&self, tier: BankTier, index: usize) -> Result<&BalanceSheet> {
        if index >= self.counts.get(tier) {
            return Err(Error::Input(format!(
                "bank {index} out of range for {tier} tier of {}",
                self.counts.get(tier)
            )));
        }
        Ok(self.tier_sheet(tier))
    }

    /// Total obligation `p̄` of one bank in `tier`.
    pub fn obligation(&self, tier: BankTier) -> Money {
        self.profile(tier).total_obligation()
    }

    pub fn interbank_claims_face(&self, tier: BankTier) -> Money {
        self.tier_sheet(tier).interbank_claims_face
    }

    pub fn deposits(&self, tier: BankTier) -> Money {
        self.tier_sheet(tier).deposits
    }

    /// Global index range occupied by `tier`.
    pub fn bank_range(&self, tier: BankTier) -> Range<usize> {
        let [c, m, b] = self.counts.as_array();
        match tier {
            BankTier::Central => 0..c,
            BankTier::Massive => c..c + m,
            BankTier::Big => c + m..c + m + b,
        }
    }

    pub fn bank_index(&self, tier: BankTier, index: usize) -> Result<usize> {
        self.sheet(tier, index)?;
        Ok(self.bank_range(tier).start + index)
    }

    pub fn tier_of(&self, bank: usize) -> Option<BankTier> {
        BankTier::ALL.into_iter().find(|&t| self.bank_range(t).contains(&bank))
    }

    /// Σ over all banks of interbank claims at face value.
    pub fn total_claims_face(&self) -> Money {
        BankTier::ALL
            .iter()
            .map(|&t| self.interbank_claims_face(t) * self.counts.get(t) as f64)
            .sum()
    }

    /// Σ over all banks of interbank liabilities at face value.
    pub fn total_interbank_liabilities(&self) -> Money {
        BankTier::ALL
            .iter()
            .map(|&t| self.profile(t).interbank() * self.counts.get(t) as f64)
            .sum()
    }

    /// Per-bank external assets as a flat vector in global order.
    pub fn external_assets_vector(&self) -> Vec<f64> {
        self.expand(|sheet| sheet.external_assets.0)
    }

    pub(crate) fn expand(&self, f: impl Fn(&BalanceSheet) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_banks());
        for tier in BankTier::ALL {
            let v = f(self.tier_sheet(tier));
            out.extend(std::iter::repeat(v).take(self.counts.get(tier)));
        }
        out
    }
}
