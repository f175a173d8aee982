//! From construction-cost constants to a fully specified [`GalacticNetwork`].
//!
//! The chain is: battle-station cost, the share of output a comparable
//! wartime project absorbed, the implied output of the economy, and finally
//! the sovereign debt left outstanding and how the banks hold it. The
//! interbank liabilities are primitive inputs; external assets are backed out
//! of them with a per-tier capital buffer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Money;
use crate::network::{claims_face_per_bank, BankTier, GalacticNetwork, LiabilityProfile, TierCounts};

/// A `(year, amount)` row of a historical table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearValue(pub i32, pub f64);

/// Manhattan Project spending, MILLION 1945 dollars.
pub const MANHATTAN_EXPENDITURES: [YearValue; 5] = [
    YearValue(1942, 16.1),
    YearValue(1943, 344.6),
    YearValue(1944, 939.4),
    YearValue(1945, 610.3),
    YearValue(1946, 281.0),
];

/// US GDP, BILLION 1945 dollars.
pub const US_GDP: [YearValue; 5] = [
    YearValue(1942, 182.5),
    YearValue(1943, 213.2),
    YearValue(1944, 230.3),
    YearValue(1945, 228.2),
    YearValue(1946, 202.4),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierLiabilities {
    pub central: LiabilityProfile,
    pub massive: LiabilityProfile,
    pub big: LiabilityProfile,
}

impl Default for TierLiabilities {
    fn default() -> Self {
        TierLiabilities {
            central: LiabilityProfile::new(0.0, 0.0, 0.0, 2500.0),
            massive: LiabilityProfile::new(3.0, 0.333, 0.5, 0.0),
            big: LiabilityProfile::new(0.1, 0.47, 0.002, 0.0),
        }
    }
}

impl TierLiabilities {
    pub fn as_array(&self) -> [LiabilityProfile; 3] {
        [self.central, self.massive, self.big]
    }
}

/// Equity cushion over total obligations, as a fraction, per tier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapitalBuffers {
    pub central: f64,
    pub massive: f64,
    pub big: f64,
}

impl Default for CapitalBuffers {
    fn default() -> Self {
        CapitalBuffers { central: 0.5, massive: 0.05, big: 0.55 }
    }
}

impl CapitalBuffers {
    pub fn as_array(&self) -> [f64; 3] {
        [self.central, self.massive, self.big]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationParams {
    pub ds1_total_cost: Money,
    pub ds1_paid_fraction: f64,
    pub ds2_total_cost: Money,
    pub ggp_endor: Money,
    pub growth_rate: f64,
    pub construction_years: u32,
    pub manhattan_expenditures: Vec<YearValue>,
    pub us_gdp: Vec<YearValue>,
    pub tier_counts: TierCounts,
    pub liabilities: TierLiabilities,
    pub capital_buffer: CapitalBuffers,
    /// Reported size of the banking sector relative to GGP. Narrative only.
    pub banking_sector_ggp_fraction: f64,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        CalibrationParams {
            ds1_total_cost: Money(193.0),
            ds1_paid_fraction: 0.5,
            ds2_total_cost: Money(419.0),
            ggp_endor: Money(6090.0),
            growth_rate: 0.02,
            construction_years: 20,
            manhattan_expenditures: MANHATTAN_EXPENDITURES.to_vec(),
            us_gdp: US_GDP.to_vec(),
            tier_counts: TierCounts::default(),
            liabilities: TierLiabilities::default(),
            capital_buffer: CapitalBuffers::default(),
            banking_sector_ggp_fraction: 0.60,
        }
    }
}

impl CalibrationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ds1_paid_fraction) {
            return Err(Error::Domain(format!("ds1_paid_fraction must lie in [0, 1], got {}", self.ds1_paid_fraction)));
        }
        if !(self.growth_rate > -1.0) {
            return Err(Error::Domain(format!("growth_rate must exceed -1, got {}", self.growth_rate)));
        }
        for (name, cost) in [("ds1_total_cost", self.ds1_total_cost), ("ds2_total_cost", self.ds2_total_cost)] {
            if !(cost.0 >= 0.0) || !cost.0.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite and non-negative, got {cost}")));
            }
        }
        if !(self.ggp_endor.0 > 0.0) {
            return Err(Error::Domain(format!("ggp_endor must be positive, got {}", self.ggp_endor)));
        }
        if self.capital_buffer.as_array().iter().any(|b| !b.is_finite() || *b <= -1.0) {
            return Err(Error::Domain("capital buffers must be finite and greater than -1".into()));
        }
        Ok(())
    }
}

/// Steel cost of a sphere rescaled from one diameter to another (cube law).
pub fn steel_cost_scaled(base_steel_cost: Money, base_diameter_km: f64, new_diameter_km: f64) -> Result<Money> {
    if !(base_diameter_km > 0.0) || !(new_diameter_km > 0.0) {
        return Err(Error::Domain(format!(
            "diameters must be positive, got {base_diameter_km} and {new_diameter_km}"
        )));
    }
    Ok(base_steel_cost * (new_diameter_km / base_diameter_km).powi(3))
}

/// Cumulative project spending over cumulative GDP. Spending is in millions
/// and GDP in billions, as tabulated.
pub fn manhattan_gdp_fraction(expenditures: &[YearValue], gdps: &[YearValue]) -> Result<f64> {
    let mut spend_years: Vec<i32> = expenditures.iter().map(|r| r.0).collect();
    let mut gdp_years: Vec<i32> = gdps.iter().map(|r| r.0).collect();
    spend_years.sort_unstable();
    gdp_years.sort_unstable();
    if spend_years != gdp_years {
        return Err(Error::Input(format!("year sets differ: {spend_years:?} vs {gdp_years:?}")));
    }
    let spend: f64 = expenditures.iter().map(|r| r.1).sum::<f64>() * 1e6;
    let gdp: f64 = gdps.iter().map(|r| r.1).sum::<f64>() * 1e9;
    if !(gdp > 0.0) {
        return Err(Error::Input("total GDP must be positive".into()));
    }
    Ok(spend / gdp)
}

/// Total output implied by a project that absorbed `gdp_fraction` of it,
/// together with the per-year average.
pub fn ggp_from_project(project_cost: Money, gdp_fraction: f64, years: u32) -> Result<(Money, Money)> {
    if !(gdp_fraction > 0.0) {
        return Err(Error::Domain(format!("gdp fraction must be positive, got {gdp_fraction}")));
    }
    if years == 0 {
        return Err(Error::Domain("project must span at least one year".into()));
    }
    let total = project_cost / gdp_fraction;
    Ok((total, total / years as f64))
}

/// Compounds `base` at `rate` for `years` years.
pub fn ggp_with_growth(base: Money, rate: f64, years: f64) -> Money {
    base * (1.0 + rate).powf(years)
}

/// Unpaid sovereign debt: the unpaid share of the first station plus all of
/// the second. Interest is zero.
pub fn outstanding_debt(params: &CalibrationParams) -> Money {
    params.ds1_total_cost * (1.0 - params.ds1_paid_fraction) + params.ds2_total_cost
}

/// Two thirds of the debt to the central bank, the rest evenly over the
/// massive banks. Returns `(central_holding, per_massive_holding)`.
pub fn bond_allocation(outstanding: Money, massive_count: usize) -> Result<(Money, Money)> {
    if massive_count == 0 {
        return Err(Error::DegenerateNetwork("no massive banks to hold sovereign debt".into()));
    }
    Ok((outstanding * (2.0 / 3.0), outstanding / (3.0 * massive_count as f64)))
}

pub fn build_network(params: &CalibrationParams) -> Result<GalacticNetwork> {
    params.validate()?;
    let counts = params.tier_counts;
    let profiles = params.liabilities.as_array();
    let debt = outstanding_debt(params);
    let (central_bonds, massive_bonds) = bond_allocation(debt, counts.massive)?;
    let bonds = [central_bonds, massive_bonds, Money::ZERO];
    let buffers = params.capital_buffer.as_array();

    let mut external = [Money::ZERO; 3];
    for tier in BankTier::ALL {
        let i = tier.index();
        let claims = claims_face_per_bank(&counts, &profiles, tier)?;
        let target = profiles[i].total_obligation() * (1.0 + buffers[i]);
        external[i] = (target - claims - bonds[i]).max(Money::ZERO);
    }
    GalacticNetwork::new(counts, profiles, external, bonds, params.ggp_endor, debt)
}
