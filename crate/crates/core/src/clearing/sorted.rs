use crate::error::Result;
use crate::money::Money;
use crate::network::{BankTier, GalacticNetwork};

use super::compressed::TierCoefficients;
use super::MAX_ITERATIONS;

/// Outside assets of one scenario, sorted within each tier.
///
/// Given the three tier payment sums `S`, bank `j` of tier `d` pays
/// `min(p̄_d, (a_j + shift_d + I_d(S)) / (1 + κ_d))`, where `I_d` collects
/// the inflow from other tiers plus `κ_d S_d` from its own and `κ_d` is the
/// same-tier share. With the assets sorted and prefix-summed, the new tier
/// sum is one binary search away, so the clearing fixed point becomes a
/// three-dimensional Picard iteration on `S`. Its greatest fixed point is
/// the tier aggregate of the greatest clearing vector.
///
/// A uniform per-tier `shift` leaves the sort order untouched, so one
/// `SortedTierAssets` serves every bailout candidate of a scenario.
#[derive(Debug, Clone)]
pub struct SortedTierAssets {
    coef: TierCoefficients,
    sorted: [Vec<f64>; 3],
    prefix: [Vec<f64>; 3],
}

/// Tier-level result of [`SortedTierAssets::solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierClearing {
    pub payment_sums: [f64; 3],
    pub defaults: [usize; 3],
    pub external_paid: Money,
    pub iterations: usize,
}

impl TierClearing {
    pub fn n_defaults(&self) -> usize {
        self.defaults.iter().sum()
    }
}

impl SortedTierAssets {
    pub fn new(network: &GalacticNetwork, assets: &[f64]) -> Result<Self> {
        super::compressed::clearing_inputs_check(network, assets)?;
        let coef = TierCoefficients::new(network)?;
        let mut sorted: [Vec<f64>; 3] = Default::default();
        let mut prefix: [Vec<f64>; 3] = Default::default();
        for tier in BankTier::ALL {
            let d = tier.index();
            let mut values = assets[network.bank_range(tier)].to_vec();
            values.sort_unstable_by(f64::total_cmp);
            let mut acc = 0.0;
            let mut sums = Vec::with_capacity(values.len() + 1);
            sums.push(0.0);
            for v in &values {
                acc += v;
                sums.push(acc);
            }
            sorted[d] = values;
            prefix[d] = sums;
        }
        Ok(SortedTierAssets { coef, sorted, prefix })
    }

    /// Bank `j` of tier `d` receives `base` on top of its own assets
    /// (`shift` plus interbank inflow), scaled by `1 / (1 + κ_d)`.
    fn base(&self, sums: &[f64; 3], shift: &[f64; 3], d: usize) -> f64 {
        shift[d] + self.coef.cross_inflow(sums, d) + sums[d] * self.coef.share[d][d]
    }

    fn tier_sum(&self, sums: &[f64; 3], shift: &[f64; 3], d: usize) -> f64 {
        let bar = self.coef.obligation[d];
        if bar <= 0.0 {
            return 0.0;
        }
        let kappa = self.coef.share[d][d];
        let base = self.base(sums, shift, d);
        let threshold = bar * (1.0 + kappa) - base;
        let values = &self.sorted[d];
        let k = values.partition_point(|&a| a < threshold);
        (self.prefix[d][k] + k as f64 * base) / (1.0 + kappa) + (values.len() - k) as f64 * bar
    }

    /// Greatest clearing fixed point with `shift[d]` added to the assets of
    /// every tier-`d` bank. Banks short by more than `tol_abs` count as
    /// defaulted.
    pub fn solve(&self, shift: [f64; 3], tol_abs: f64) -> TierClearing {
        let coef = &self.coef;
        let mut sums: [f64; 3] = std::array::from_fn(|d| coef.counts[d] as f64 * coef.obligation[d]);
        let scale = sums.iter().cloned().fold(0.0, f64::max);
        let mut iterations = 0;
        if scale > 0.0 {
            while iterations < MAX_ITERATIONS {
                let next = [
                    self.tier_sum(&sums, &shift, 0),
                    self.tier_sum(&sums, &shift, 1),
                    self.tier_sum(&sums, &shift, 2),
                ];
                iterations += 1;
                let step = (0..3).map(|d| (next[d] - sums[d]).abs()).fold(0.0, f64::max);
                // Picard from the top only moves down; clamp rounding noise.
                for d in 0..3 {
                    sums[d] = next[d].min(sums[d]);
                }
                if step <= 1e-14 * scale {
                    break;
                }
            }
        }

        let mut defaults = [0; 3];
        let mut external_paid = 0.0;
        for d in 0..3 {
            let bar = coef.obligation[d];
            if bar <= 0.0 {
                continue;
            }
            let kappa = coef.share[d][d];
            let cutoff = (bar - tol_abs) * (1.0 + kappa) - self.base(&sums, &shift, d);
            defaults[d] = self.sorted[d].partition_point(|&a| a < cutoff);
            external_paid += sums[d] * coef.external[d] / bar;
        }
        TierClearing { payment_sums: sums, defaults, external_paid: Money(external_paid), iterations }
    }
}
