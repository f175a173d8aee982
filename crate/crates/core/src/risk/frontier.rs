//! Minimal bailouts on the (per-Massive, per-Big) plane.
//!
//! For each per-Big grid value the smallest per-Massive injection meeting a
//! criterion is found by bisection on the lattice `k × resolution`. All
//! candidates are evaluated on the same scenarios, so a larger bailout can
//! only lower every sample's loss and the criterion verdict is monotone in
//! `k`. Bisection for every grid point and criterion runs in lockstep: one
//! pass over the scenarios draws each scenario once and clears it under
//! every open candidate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clearing::DEFAULT_TOL_ABS;
use crate::error::{Error, Result};
use crate::money::Money;
use crate::network::GalacticNetwork;
use crate::shock::ShockParams;

use super::loss::LossConfig;
use super::measures::{satisfied, Criterion};
use super::montecarlo::prepare_scenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontierSettings {
    /// Upper end of the per-Massive search range.
    pub max_per_massive: Money,
    /// Lattice step of the per-Massive search.
    pub resolution: Money,
}

impl Default for FrontierSettings {
    fn default() -> Self {
        FrontierSettings { max_per_massive: Money(10.0), resolution: Money(0.001) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub per_big: Money,
    /// `None` when even `max_per_massive` does not meet the criterion.
    pub minimal_per_massive: Option<Money>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub criterion: Criterion,
    pub points: Vec<FrontierPoint>,
}

impl Frontier {
    pub fn has_gaps(&self) -> bool {
        self.points.iter().any(|p| p.minimal_per_massive.is_none())
    }

    /// Minimal per-Massive amounts never increase along the grid, with an
    /// unattainable point allowed only before every attainable one.
    pub fn is_monotone(&self) -> bool {
        let mut last: Option<f64> = None;
        for p in &self.points {
            match (p.minimal_per_massive, last) {
                (None, Some(_)) => return false,
                (Some(m), Some(prev)) if m.0 > prev => return false,
                (Some(m), _) => last = Some(m.0),
                (None, None) => {}
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalBailout {
    pub per_massive: Money,
    pub per_big: Money,
    pub total: Money,
    pub ggp_fraction: f64,
}

/// Cheapest attainable point of a frontier, by `|Massive| × per_massive +
/// |Big| × per_big`. Ties go to the smaller per-Big amount.
pub fn minimal_total_bailout(frontier: &Frontier, network: &GalacticNetwork) -> Result<MinimalBailout> {
    if frontier.points.is_empty() {
        return Err(Error::Input("frontier is empty".into()));
    }
    let counts = network.counts();
    let mut best: Option<MinimalBailout> = None;
    for p in &frontier.points {
        let Some(per_massive) = p.minimal_per_massive else { continue };
        let total = per_massive * counts.massive as f64 + p.per_big * counts.big as f64;
        let better = match &best {
            None => true,
            Some(b) => total.0 < b.total.0 || (total.0 == b.total.0 && p.per_big.0 < b.per_big.0),
        };
        if better {
            best = Some(MinimalBailout {
                per_massive,
                per_big: p.per_big,
                total,
                ggp_fraction: total / network.ggp(),
            });
        }
    }
    best.ok_or_else(|| Error::Input(format!("no attainable point on the {} frontier", frontier.criterion)))
}

#[allow(clippy::too_many_arguments)]
pub fn bailout_frontier(
    network: &GalacticNetwork,
    shock: &ShockParams,
    config: &LossConfig,
    criterion: Criterion,
    grid: &[Money],
    seed: u64,
    n_scenarios: usize,
    settings: &FrontierSettings,
) -> Result<Frontier> {
    let mut all = bailout_frontiers(network, shock, config, &[criterion], grid, seed, n_scenarios, settings)?;
    Ok(all.remove(0))
}

#[derive(Debug, Clone, Copy)]
enum Search {
    Start,
    Bisect { unsatisfied: u64, satisfied: u64 },
    Done(Option<u64>),
}

struct Job {
    criterion: Criterion,
    grid_index: usize,
    state: Search,
}

/// Frontiers for several criteria over one per-Big grid, sharing every
/// scenario draw.
#[allow(clippy::too_many_arguments)]
pub fn bailout_frontiers(
    network: &GalacticNetwork,
    shock: &ShockParams,
    config: &LossConfig,
    criteria: &[Criterion],
    grid: &[Money],
    seed: u64,
    n_scenarios: usize,
    settings: &FrontierSettings,
) -> Result<Vec<Frontier>> {
    if grid.is_empty() {
        return Err(Error::Input("per-Big grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[0].0 < w[1].0)) || grid[0].0 < 0.0 {
        return Err(Error::Input("per-Big grid must be non-negative and strictly increasing".into()));
    }
    if n_scenarios == 0 {
        return Err(Error::Input("at least one scenario is required".into()));
    }
    if !(settings.resolution.0 > 0.0) || !(settings.max_per_massive.0 >= 0.0) {
        return Err(Error::Domain("frontier resolution must be positive and the range non-negative".into()));
    }
    shock.validate()?;
    config.validate()?;

    let top = (settings.max_per_massive.0 / settings.resolution.0).round() as u64;
    let mut jobs: Vec<Job> = criteria
        .iter()
        .flat_map(|&criterion| {
            (0..grid.len()).map(move |grid_index| Job { criterion, grid_index, state: Search::Start })
        })
        .collect();

    loop {
        // Candidate allocations as (lattice step, grid index).
        let mut wanted: BTreeMap<(u64, usize), usize> = BTreeMap::new();
        for job in &jobs {
            match job.state {
                Search::Start => {
                    wanted.insert((0, job.grid_index), 0);
                    wanted.insert((top, job.grid_index), 0);
                }
                Search::Bisect { unsatisfied, satisfied } => {
                    wanted.insert(((unsatisfied + satisfied) / 2, job.grid_index), 0);
                }
                Search::Done(_) => {}
            }
        }
        if wanted.is_empty() {
            break;
        }
        let candidates: Vec<(u64, usize)> = wanted.keys().copied().collect();
        for (slot, key) in candidates.iter().enumerate() {
            wanted.insert(*key, slot);
        }
        let shifts: Vec<[f64; 3]> = candidates
            .iter()
            .map(|&(k, g)| [0.0, k as f64 * settings.resolution.0, grid[g].0])
            .collect();

        let per_scenario: Vec<Vec<f64>> = (0..n_scenarios as u64)
            .into_par_iter()
            .map(|i| {
                let prepared = prepare_scenario(network, shock, config, seed, i)?;
                Ok(shifts
                    .iter()
                    .map(|&shift| prepared.solve(shift, DEFAULT_TOL_ABS).loss_sample(i, network, config).real_economy_loss.0)
                    .collect())
            })
            .collect::<Result<_>>()?;

        let verdict = |criterion: Criterion, key: (u64, usize)| -> bool {
            let slot = wanted[&key];
            let losses: Vec<f64> = per_scenario.iter().map(|row| row[slot]).collect();
            satisfied(&losses, criterion, config)
        };

        for job in &mut jobs {
            let g = job.grid_index;
            job.state = match job.state {
                Search::Start => {
                    if verdict(job.criterion, (0, g)) {
                        Search::Done(Some(0))
                    } else if !verdict(job.criterion, (top, g)) {
                        Search::Done(None)
                    } else {
                        Search::Bisect { unsatisfied: 0, satisfied: top }
                    }
                }
                Search::Bisect { unsatisfied, satisfied } => {
                    let mid = (unsatisfied + satisfied) / 2;
                    if verdict(job.criterion, (mid, g)) {
                        Search::Bisect { unsatisfied, satisfied: mid }
                    } else {
                        Search::Bisect { unsatisfied: mid, satisfied }
                    }
                }
                done => done,
            };
            if let Search::Bisect { unsatisfied, satisfied } = job.state {
                if satisfied - unsatisfied <= 1 {
                    job.state = Search::Done(Some(satisfied));
                }
            }
        }
    }

    Ok(criteria
        .iter()
        .map(|&criterion| Frontier {
            criterion,
            points: jobs
                .iter()
                .filter(|j| j.criterion == criterion)
                .map(|j| FrontierPoint {
                    per_big: grid[j.grid_index],
                    minimal_per_massive: match j.state {
                        Search::Done(Some(k)) => Some(Money(k as f64 * settings.resolution.0)),
                        _ => None,
                    },
                })
                .collect(),
        })
        .collect())
}
