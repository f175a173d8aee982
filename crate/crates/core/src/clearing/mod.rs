//! Clearing payment vectors for proportional repayment networks.
//!
//! A clearing vector `p*` satisfies `p_i = min(p̄_i, a_i + Σ_j Π_ji p_j)`,
//! where `p̄` are total obligations, `a` are outside assets and `Π` is the
//! matrix of relative liabilities. The set of clearing vectors is a complete
//! lattice; Picard iteration started at `p̄` decreases monotonically to its
//! greatest element, and started at zero increases to its least.
//!
//! Three solvers share that contract:
//!
//! * [`clearing_dense`] works on an explicit `n × n` liability matrix and is
//!   the reference for everything else.
//! * [`clearing_compressed`] runs the same Picard iteration on a
//!   [`GalacticNetwork`](crate::network::GalacticNetwork) in `O(n)` per step
//!   by aggregating payments per tier.
//! * [`SortedTierAssets`] goes one step further: with assets sorted inside
//!   each tier the whole fixed point collapses onto the three tier payment
//!   sums, which is what the Monte Carlo and frontier code run.

mod compressed;
mod dense;
mod sorted;

pub use compressed::{clearing_compressed, expand_to_dense, least_clearing_compressed};
pub use dense::{clearing_dense, least_clearing_vector, DenseNetwork};
pub use sorted::{SortedTierAssets, TierClearing};

use crate::money::Money;

/// Relative Picard tolerance, scaled by the largest obligation.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// A bank whose shortfall exceeds this many Q is flagged as defaulted.
pub const DEFAULT_TOL_ABS: f64 = 1e-6;
/// Iteration cap; the networks here converge in a handful of steps.
pub const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ClearingOutcome {
    /// Realized payments per bank, Q.
    pub payments: Vec<f64>,
    pub defaulted: Vec<bool>,
    /// `p̄_i − p*_i`, Q.
    pub shortfall: Vec<f64>,
    /// Total received by the outside economy.
    pub external_paid: Money,
    pub iterations: usize,
}

impl ClearingOutcome {
    pub(crate) fn new(payments: Vec<f64>, obligations: &[f64], external: &[f64], iterations: usize, tol_abs: f64) -> Self {
        let shortfall: Vec<f64> = obligations
            .iter()
            .zip(&payments)
            .map(|(&bar, &p)| (bar - p).max(0.0))
            .collect();
        let defaulted = shortfall.iter().map(|&s| s > tol_abs).collect();
        let external_paid = payments
            .iter()
            .zip(obligations.iter().zip(external))
            .filter(|(_, (&bar, _))| bar > 0.0)
            .map(|(&p, (&bar, &ext))| p * ext / bar)
            .sum();
        ClearingOutcome { payments, defaulted, shortfall, external_paid: Money(external_paid), iterations }
    }

    pub fn n_defaults(&self) -> usize {
        self.defaulted.iter().filter(|&&d| d).count()
    }
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
