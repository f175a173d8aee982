//! The three subcommands, as library functions that return what they wrote.

use std::path::{Path, PathBuf};

use galaxy_contagion::calibration::{bond_allocation, ggp_from_project, manhattan_gdp_fraction, outstanding_debt};
use galaxy_contagion::network::{BankTier, GalacticNetwork};
use galaxy_contagion::risk::{
    bailout_frontiers, green_line_loss, minimal_total_bailout, simulate_clearings, BailoutAllocation, Criterion,
    Frontier, LossConfig, LossSample, LossSummary, MinimalBailout,
};
use galaxy_contagion::Money;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, histogram, losses_table, Table};

#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub dir: PathBuf,
    /// `(name, value)` pairs, also written to `headline.csv`.
    pub headline: Vec<(String, f64)>,
    pub network: GalacticNetwork,
}

impl CalibrationReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.headline.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

pub fn cmd_calibrate(config: &RunConfig, dir: &Path) -> Result<CalibrationReport, CliError> {
    let params = &config.calibration;
    let network = config.network()?;
    let debt = outstanding_debt(params);
    let fraction = manhattan_gdp_fraction(&params.manhattan_expenditures, &params.us_gdp)?;
    let (project_total, project_annual) = ggp_from_project(params.ds1_total_cost, fraction, params.construction_years)?;
    let (central_bonds, massive_bonds) = bond_allocation(debt, params.tier_counts.massive)?;
    let loss = config.loss_config();

    let headline: Vec<(String, f64)> = [
        ("outstanding_debt", debt.0),
        ("ggp", params.ggp_endor.0),
        ("bank_count", network.n_banks() as f64),
        ("ds1_total_cost", params.ds1_total_cost.0),
        ("ds2_total_cost", params.ds2_total_cost.0),
        ("manhattan_gdp_fraction", fraction),
        ("project_implied_ggp_total", project_total.0),
        ("project_implied_ggp_annual", project_annual.0),
        ("central_bond_holding", central_bonds.0),
        ("per_massive_bond_holding", massive_bonds.0),
        ("green_line", green_line_loss(&network, &loss).0),
        ("green_line_ggp_fraction", green_line_loss(&network, &loss) / params.ggp_endor),
        ("banking_sector_assets_reported", (params.ggp_endor * params.banking_sector_ggp_fraction).0),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();

    let mut tiers = Table::new(
        "per-bank amounts in QUINTILLION dollars (Q)",
        &[
            "tier",
            "count",
            "total_obligation",
            "owed_to_central",
            "owed_to_massive",
            "owed_to_big",
            "owed_external",
            "interbank_claims_face",
            "bond_holdings_face",
            "external_assets",
            "deposits",
        ],
    );
    for tier in BankTier::ALL {
        let p = network.profile(tier);
        let s = network.tier_sheet(tier);
        tiers.push(vec![
            tier.name().to_string(),
            network.counts().get(tier).to_string(),
            fmt_f64(p.total_obligation().0),
            fmt_f64(p.owed_to_central.0),
            fmt_f64(p.owed_to_massive.0),
            fmt_f64(p.owed_to_big.0),
            fmt_f64(p.owed_external.0),
            fmt_f64(s.interbank_claims_face.0),
            fmt_f64(s.bond_holdings_face.0),
            fmt_f64(s.external_assets.0),
            fmt_f64(s.deposits.0),
        ]);
    }
    tiers.write(&dir.join("network_summary.csv"))?;

    let mut head = Table::new("amounts in QUINTILLION dollars (Q); fractions are plain ratios", &["metric", "value"]);
    for (k, v) in &headline {
        head.push(vec![k.clone(), fmt_f64(*v)]);
    }
    head.write(&dir.join("headline.csv"))?;

    Ok(CalibrationReport { dir: dir.to_path_buf(), headline, network })
}

/// A named column of `summary.csv`.
type Metric<'a> = (&'static str, Box<dyn Fn(&LossSummary) -> f64 + 'a>);

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub dir: PathBuf,
    pub no_insurance: LossSummary,
    pub insurance: Option<LossSummary>,
    /// Samples written to `losses.csv`.
    pub samples: Vec<LossSample>,
}

pub fn cmd_simulate(
    config: &RunConfig,
    insurance: bool,
    bailout: BailoutAllocation,
    dir: &Path,
) -> Result<SimulationReport, CliError> {
    let network = config.network()?;
    let base = LossConfig { deposit_insurance: false, ..config.loss_config() };
    let insured = LossConfig { deposit_insurance: true, ..base };
    let clearings = simulate_clearings(&network, &config.shock, &bailout, &base, config.n_scenarios, config.seed)?;
    let bare: Vec<LossSample> = clearings
        .iter()
        .enumerate()
        .map(|(i, c)| c.loss_sample(i as u64, &network, &base))
        .collect();
    let covered: Option<Vec<LossSample>> = insurance.then(|| {
        clearings
            .iter()
            .enumerate()
            .map(|(i, c)| c.loss_sample(i as u64, &network, &insured))
            .collect()
    });

    let no_insurance = LossSummary::new(&bare, None, &network, &base)?;
    let with_insurance = match &covered {
        Some(s) => Some(LossSummary::new(s, Some(&bare), &network, &insured)?),
        None => None,
    };
    let samples = covered.unwrap_or_else(|| bare.clone());
    losses_table(&samples).write(&dir.join("losses.csv"))?;

    let ggp = base.ggp;
    let pct = |s: &[LossSample]| -> Vec<f64> { s.iter().map(|x| 100.0 * (x.real_economy_loss / ggp)).collect() };
    let bare_pct = pct(&bare);
    let covered_pct = insurance.then(|| pct(&samples));
    let upper = bare_pct.iter().chain(covered_pct.iter().flatten()).cloned().fold(0.0, f64::max);
    let bins = config.histogram_bins;
    let width = if upper > 0.0 { upper / bins as f64 } else { 1.0 / bins as f64 };
    let bare_counts = histogram(&bare_pct, upper, bins);
    let covered_counts = covered_pct.as_ref().map(|v| histogram(v, upper, bins));
    let mut header = vec!["bin_lower_pct_ggp", "bin_upper_pct_ggp", "count_no_insurance"];
    if insurance {
        header.push("count_insurance");
    }
    let mut hist = Table::new("loss bins in percent of GGP; counts of scenarios", &header);
    for b in 0..bins {
        let mut row = vec![fmt_f64(b as f64 * width), fmt_f64((b + 1) as f64 * width), bare_counts[b].to_string()];
        if let Some(c) = &covered_counts {
            row.push(c[b].to_string());
        }
        hist.push(row);
    }
    hist.write(&dir.join("histogram.csv"))?;

    let mut header = vec!["metric", "no_insurance"];
    if insurance {
        header.push("insurance");
    }
    let mut summary = Table::new("amounts in QUINTILLION dollars (Q); *_ggp_fraction columns are plain ratios", &header);
    let mut rows: Vec<Metric> = vec![
        ("n_scenarios", Box::new(|s: &LossSummary| s.n_scenarios as f64)),
        ("seed", Box::new(|_: &LossSummary| config.seed as f64)),
        ("ggp", Box::new(move |_: &LossSummary| ggp.0)),
        ("green_line", Box::new(|s: &LossSummary| s.green_line.0)),
        ("green_line_ggp_fraction", Box::new(move |s: &LossSummary| s.green_line / ggp)),
        ("mean_loss", Box::new(|s: &LossSummary| s.mean_loss.0)),
        ("mean_loss_ggp_fraction", Box::new(move |s: &LossSummary| s.mean_loss / ggp)),
        ("median_loss", Box::new(|s: &LossSummary| s.median_loss.0)),
        ("quantile_90", Box::new(|s: &LossSummary| s.quantile_90.0)),
        ("quantile_95", Box::new(|s: &LossSummary| s.quantile_95.0)),
        ("quantile_99", Box::new(|s: &LossSummary| s.quantile_99.0)),
        ("value_at_risk", Box::new(|s: &LossSummary| s.value_at_risk.0)),
        ("average_var", Box::new(|s: &LossSummary| s.average_var.0)),
        ("exceedance_threshold", Box::new(move |_: &LossSummary| base.threshold().0)),
        ("exceedance_probability", Box::new(|s: &LossSummary| s.exceedance_probability)),
        ("fraction_below_green_line", Box::new(|s: &LossSummary| s.fraction_below_green_line)),
        ("mean_defaults", Box::new(|s: &LossSummary| s.mean_defaults)),
        ("central_default_fraction", Box::new(|s: &LossSummary| s.central_default_fraction)),
        (
            "median_systemic_default_fraction_above_green_line",
            Box::new(|s: &LossSummary| s.median_systemic_default_fraction_above_green_line),
        ),
        ("mean_insurance_payout", Box::new(|s: &LossSummary| s.mean_insurance_payout.0)),
        ("mean_insurance_payout_ggp_fraction", Box::new(move |s: &LossSummary| s.mean_insurance_payout / ggp)),
        ("mean_payout_below_green_line", Box::new(|s: &LossSummary| s.mean_payout_below_green_line.0)),
        ("mean_payout_above_green_line", Box::new(|s: &LossSummary| s.mean_payout_above_green_line.0)),
    ];
    let per_massive = bailout.per_massive().0;
    let per_big = bailout.per_big().0;
    let total = bailout.total(&network).0;
    rows.push(("bailout_per_massive", Box::new(move |_: &LossSummary| per_massive)));
    rows.push(("bailout_per_big", Box::new(move |_: &LossSummary| per_big)));
    rows.push(("bailout_total", Box::new(move |_: &LossSummary| total)));
    for (name, f) in &rows {
        let mut row = vec![name.to_string(), fmt_f64(f(&no_insurance))];
        if let Some(s) = &with_insurance {
            row.push(fmt_f64(f(s)));
        }
        summary.push(row);
    }
    summary.write(&dir.join("summary.csv"))?;

    Ok(SimulationReport { dir: dir.to_path_buf(), no_insurance, insurance: with_insurance, samples })
}

#[derive(Debug, Clone)]
pub struct FrontierReport {
    pub dir: PathBuf,
    pub frontiers: Vec<Frontier>,
    /// Cheapest point per criterion; `None` when nothing on the grid works.
    pub minima: Vec<(Criterion, Option<MinimalBailout>)>,
}

impl FrontierReport {
    pub fn has_gaps(&self) -> bool {
        self.frontiers.iter().any(Frontier::has_gaps) || self.minima.iter().any(|(_, m)| m.is_none())
    }

    pub fn minimum(&self, criterion: Criterion) -> Option<MinimalBailout> {
        self.minima.iter().find(|(c, _)| *c == criterion).and_then(|(_, m)| *m)
    }

    /// The three-criterion summary in the layout of a bailout-size table:
    /// per-bank amounts in QUADRILLIONS, totals in QUINTILLIONS and % GGP.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<14} {:>22} {:>18} {:>16} {:>10}\n",
            "criterion", "Massive (QUADRILLIONS)", "Big (QUADRILLIONS)", "Total (Q)", "% GGP"
        );
        for (criterion, m) in &self.minima {
            match m {
                Some(m) => out.push_str(&format!(
                    "{:<14} {:>22.0} {:>18.0} {:>16.0} {:>9.1}%\n",
                    criterion.name(),
                    m.per_massive.quadrillions(),
                    m.per_big.quadrillions(),
                    m.total.0,
                    100.0 * m.ggp_fraction
                )),
                None => out.push_str(&format!("{:<14} {:>22}\n", criterion.name(), "unattainable on grid")),
            }
        }
        out
    }
}

pub fn cmd_frontier(config: &RunConfig, criteria: &[Criterion], dir: &Path) -> Result<FrontierReport, CliError> {
    let network = config.network()?;
    let loss = config.loss_config();
    let grid = config.grid.points()?;
    let frontiers = bailout_frontiers(
        &network,
        &config.shock,
        &loss,
        criteria,
        &grid,
        config.seed,
        config.n_scenarios,
        &config.frontier,
    )?;

    let counts = network.counts();
    let mut points = Table::new(
        "per-bank amounts and totals in QUINTILLION dollars (Q); empty cells mark unattainable points",
        &["criterion", "per_big", "minimal_per_massive", "total", "ggp_fraction"],
    );
    let mut minima = Vec::new();
    for frontier in &frontiers {
        for p in &frontier.points {
            let (m, total, frac) = match p.minimal_per_massive {
                Some(m) => {
                    let total: Money = m * counts.massive as f64 + p.per_big * counts.big as f64;
                    (fmt_f64(m.0), fmt_f64(total.0), fmt_f64(total / network.ggp()))
                }
                None => (String::new(), String::new(), String::new()),
            };
            points.push(vec![frontier.criterion.name().to_string(), fmt_f64(p.per_big.0), m, total, frac]);
        }
        minima.push((frontier.criterion, minimal_total_bailout(frontier, &network).ok()));
    }
    points.write(&dir.join("frontier.csv"))?;

    let mut best = Table::new(
        "minimal total bailout per criterion; amounts in QUINTILLION dollars (Q)",
        &["criterion", "per_massive", "per_big", "total", "ggp_fraction"],
    );
    for (criterion, m) in &minima {
        let cells = match m {
            Some(m) => vec![fmt_f64(m.per_massive.0), fmt_f64(m.per_big.0), fmt_f64(m.total.0), fmt_f64(m.ggp_fraction)],
            None => vec![String::new(); 4],
        };
        let mut row = vec![criterion.name().to_string()];
        row.extend(cells);
        best.push(row);
    }
    best.write(&dir.join("minima.csv"))?;

    Ok(FrontierReport { dir: dir.to_path_buf(), frontiers, minima })
}
