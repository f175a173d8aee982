use rayon::prelude::*;

use crate::clearing::{SortedTierAssets, TierClearing, DEFAULT_TOL_ABS};
use crate::error::{Error, Result};
use crate::network::GalacticNetwork;
use crate::shock::{sample_scenario, shocked_assets, ShockParams};

use super::loss::{BailoutAllocation, LossConfig, LossSample};

/// Draws scenario `scenario_index` and returns its post-shock assets ready
/// for clearing under any bailout.
pub fn prepare_scenario(
    network: &GalacticNetwork,
    shock: &ShockParams,
    config: &LossConfig,
    seed: u64,
    scenario_index: u64,
) -> Result<SortedTierAssets> {
    let scenario = sample_scenario(shock, network.n_banks(), seed, scenario_index);
    let assets = shocked_assets(network, shock, &scenario, config.bond_recovery)?;
    SortedTierAssets::new(network, &assets)
}

/// Tier-level clearing of every scenario, in scenario order. Scenarios run
/// on the current rayon pool.
pub fn simulate_clearings(
    network: &GalacticNetwork,
    shock: &ShockParams,
    bailout: &BailoutAllocation,
    config: &LossConfig,
    n_scenarios: usize,
    seed: u64,
) -> Result<Vec<TierClearing>> {
    if n_scenarios == 0 {
        return Err(Error::Input("at least one scenario is required".into()));
    }
    shock.validate()?;
    config.validate()?;
    let shifts = bailout.shifts();
    (0..n_scenarios as u64)
        .into_par_iter()
        .map(|i| Ok(prepare_scenario(network, shock, config, seed, i)?.solve(shifts, DEFAULT_TOL_ABS)))
        .collect()
}

/// Loss samples ordered by scenario index. Sample `i` depends only on the
/// inputs, `seed` and `i`.
pub fn run_monte_carlo(
    network: &GalacticNetwork,
    shock: &ShockParams,
    bailout: &BailoutAllocation,
    config: &LossConfig,
    n_scenarios: usize,
    seed: u64,
) -> Result<Vec<LossSample>> {
    let clearings = simulate_clearings(network, shock, bailout, config, n_scenarios, seed)?;
    Ok(clearings
        .iter()
        .enumerate()
        .map(|(i, c)| c.loss_sample(i as u64, network, config))
        .collect())
}
