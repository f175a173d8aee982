use crate::error::{Error, Result};
use crate::network::{BankTier, GalacticNetwork};

use super::{sup_distance, ClearingOutcome, DenseNetwork, DEFAULT_TOL_ABS, MAX_ITERATIONS};

/// Tier-level constants of the clearing map.
#[derive(Debug, Clone)]
pub(crate) struct TierCoefficients {
    pub counts: [usize; 3],
    /// `p̄` of one bank per tier.
    pub obligation: [f64; 3],
    pub external: [f64; 3],
    /// `share[c][d]`: fraction of tier-`c` payments that reaches one bank of
    /// tier `d`, per unit of tier-`c` payment sum. Same-tier entries exclude
    /// the payer and are applied to `S_d − p_j`.
    pub share: [[f64; 3]; 3],
}

impl TierCoefficients {
    pub fn new(network: &GalacticNetwork) -> Result<Self> {
        let counts = network.counts().as_array();
        let mut obligation = [0.0; 3];
        let mut external = [0.0; 3];
        let mut share = [[0.0; 3]; 3];
        for c in BankTier::ALL {
            let profile = network.profile(c);
            let bar = profile.total_obligation().0;
            obligation[c.index()] = bar;
            external[c.index()] = profile.owed_external.0;
            if bar <= 0.0 {
                continue;
            }
            for d in BankTier::ALL {
                let owed = profile.owed_to(d).0;
                if owed == 0.0 {
                    continue;
                }
                let creditors = if c == d { counts[d.index()] - 1 } else { counts[d.index()] };
                if creditors == 0 {
                    return Err(Error::DegenerateNetwork(format!(
                        "{c} banks owe {owed} to their own tier but have no peers"
                    )));
                }
                share[c.index()][d.index()] = owed / (bar * creditors as f64);
            }
        }
        Ok(TierCoefficients { counts, obligation, external, share })
    }

    pub fn obligations_vector(&self) -> Vec<f64> {
        self.expand(self.obligation)
    }

    pub fn external_vector(&self) -> Vec<f64> {
        self.expand(self.external)
    }

    fn expand(&self, per_tier: [f64; 3]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.counts.iter().sum());
        for (value, &count) in per_tier.iter().zip(&self.counts) {
            out.extend(std::iter::repeat(*value).take(count));
        }
        out
    }

    /// Inflow to one bank of tier `d` from the other tiers.
    pub fn cross_inflow(&self, sums: &[f64; 3], d: usize) -> f64 {
        (0..3).filter(|&c| c != d).map(|c| sums[c] * self.share[c][d]).sum()
    }
}

pub(crate) fn clearing_inputs_check(network: &GalacticNetwork, assets: &[f64]) -> Result<()> {
    if assets.len() != network.n_banks() {
        return Err(Error::Input(format!(
            "{} asset entries for a network of {} banks",
            assets.len(),
            network.n_banks()
        )));
    }
    if assets.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
        return Err(Error::Domain("assets must be finite and non-negative".into()));
    }
    Ok(())
}

fn picard(network: &GalacticNetwork, assets: &[f64], tolerance: f64, from_top: bool) -> Result<ClearingOutcome> {
    clearing_inputs_check(network, assets)?;
    let coef = TierCoefficients::new(network)?;
    let bar = coef.obligations_vector();
    let scale = coef.obligation.iter().cloned().fold(0.0, f64::max);
    let ranges: Vec<_> = BankTier::ALL.iter().map(|&t| network.bank_range(t)).collect();

    let mut p = if from_top { bar.clone() } else { vec![0.0; bar.len()] };
    let mut next = vec![0.0; bar.len()];
    let mut iterations = 0;
    if scale > 0.0 {
        while iterations < MAX_ITERATIONS {
            let mut sums = [0.0; 3];
            for (d, range) in ranges.iter().enumerate() {
                sums[d] = p[range.clone()].iter().sum();
            }
            for (d, range) in ranges.iter().enumerate() {
                let cross = coef.cross_inflow(&sums, d);
                let own = coef.share[d][d];
                let cap = coef.obligation[d];
                for j in range.clone() {
                    let inflow = cross + (sums[d] - p[j]) * own;
                    next[j] = cap.min(assets[j] + inflow);
                }
            }
            iterations += 1;
            let step = sup_distance(&next, &p);
            std::mem::swap(&mut p, &mut next);
            if step <= tolerance * scale {
                break;
            }
        }
    } else {
        p.iter_mut().for_each(|x| *x = 0.0);
    }
    Ok(ClearingOutcome::new(p, &bar, &coef.external_vector(), iterations, DEFAULT_TOL_ABS))
}

/// Greatest clearing vector of a tier-structured network, `O(n)` per step.
///
/// `scenario_assets` are the outside assets per bank in global order, after
/// shocks and bailouts.
pub fn clearing_compressed(network: &GalacticNetwork, scenario_assets: &[f64], tolerance: f64) -> Result<ClearingOutcome> {
    picard(network, scenario_assets, tolerance, true)
}

/// Least clearing vector of a tier-structured network.
pub fn least_clearing_compressed(
    network: &GalacticNetwork,
    scenario_assets: &[f64],
    tolerance: f64,
) -> Result<ClearingOutcome> {
    picard(network, scenario_assets, tolerance, false)
}

/// Writes out the full liability matrix of a tier network. Quadratic in the
/// bank count; meant for small networks and cross-checks.
pub fn expand_to_dense(network: &GalacticNetwork, scenario_assets: &[f64]) -> Result<DenseNetwork> {
    clearing_inputs_check(network, scenario_assets)?;
    let coef = TierCoefficients::new(network)?;
    let n = network.n_banks();
    let mut liabilities = vec![0.0; n * n];
    for c in BankTier::ALL {
        let profile = network.profile(c);
        for i in network.bank_range(c) {
            for d in BankTier::ALL {
                let owed = profile.owed_to(d).0;
                if owed == 0.0 {
                    continue;
                }
                let creditors = if c == d { coef.counts[d.index()] - 1 } else { coef.counts[d.index()] };
                let each = owed / creditors as f64;
                for j in network.bank_range(d) {
                    if j != i {
                        liabilities[i * n + j] = each;
                    }
                }
            }
        }
    }
    DenseNetwork::from_flat(n, liabilities, coef.external_vector(), scenario_assets.to_vec())
}
