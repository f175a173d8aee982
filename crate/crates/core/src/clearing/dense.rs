use crate::error::{Error, Result};

use super::{sup_distance, ClearingOutcome, DEFAULT_TOL_ABS, MAX_ITERATIONS};

/// Explicit liability matrix; entry `(i, j)` is what `i` owes `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseNetwork {
    n: usize,
    liabilities: Vec<f64>,
    external_obligation: Vec<f64>,
    assets: Vec<f64>,
}

impl DenseNetwork {
    pub fn new(liabilities: Vec<Vec<f64>>, external_obligation: Vec<f64>, assets: Vec<f64>) -> Result<Self> {
        let n = liabilities.len();
        if external_obligation.len() != n || assets.len() != n {
            return Err(Error::Input(format!(
                "dimension mismatch: {n} liability rows, {} external obligations, {} asset entries",
                external_obligation.len(),
                assets.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in liabilities.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!("liability row {i} has {} entries, expected {n}", row.len())));
            }
            if row[i] != 0.0 {
                return Err(Error::Input(format!("bank {i} owes itself {}", row[i])));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(n, flat, external_obligation, assets)
    }

    pub(crate) fn from_flat(n: usize, liabilities: Vec<f64>, external_obligation: Vec<f64>, assets: Vec<f64>) -> Result<Self> {
        let all = liabilities.iter().chain(&external_obligation).chain(&assets);
        if all.into_iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::Domain("liabilities, obligations and assets must be finite and non-negative".into()));
        }
        Ok(DenseNetwork { n, liabilities, external_obligation, assets })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn liability(&self, from: usize, to: usize) -> f64 {
        self.liabilities[from * self.n + to]
    }

    pub fn assets(&self) -> &[f64] {
        &self.assets
    }

    pub fn external_obligation(&self) -> &[f64] {
        &self.external_obligation
    }

    pub fn with_assets(&self, assets: Vec<f64>) -> Result<Self> {
        Self::from_flat(self.n, self.liabilities.clone(), self.external_obligation.clone(), assets)
    }

    /// `p̄_i`: row sum plus the external obligation.
    pub fn total_obligations(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.liabilities[i * self.n..(i + 1) * self.n].iter().sum::<f64>() + self.external_obligation[i])
            .collect()
    }

    /// One application of the clearing map.
    pub fn clearing_map(&self, payments: &[f64]) -> Vec<f64> {
        let bar = self.total_obligations();
        self.apply(payments, &bar)
    }

    fn apply(&self, payments: &[f64], bar: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut inflow = vec![0.0; n];
        for i in 0..n {
            if bar[i] <= 0.0 || payments[i] == 0.0 {
                continue;
            }
            let ratio = payments[i] / bar[i];
            let row = &self.liabilities[i * n..(i + 1) * n];
            for (j, &owed) in row.iter().enumerate() {
                inflow[j] += owed * ratio;
            }
        }
        (0..n).map(|j| bar[j].min(self.assets[j] + inflow[j])).collect()
    }

    fn picard(&self, start: Vec<f64>, tolerance: f64) -> ClearingOutcome {
        let bar = self.total_obligations();
        let scale = bar.iter().cloned().fold(0.0, f64::max);
        let mut p = start;
        let mut iterations = 0;
        if scale > 0.0 {
            while iterations < MAX_ITERATIONS {
                let next = self.apply(&p, &bar);
                iterations += 1;
                let step = sup_distance(&next, &p);
                p = next;
                if step <= tolerance * scale {
                    break;
                }
            }
        } else {
            p = vec![0.0; self.n];
        }
        ClearingOutcome::new(p, &bar, &self.external_obligation, iterations, DEFAULT_TOL_ABS)
    }
}

/// Greatest clearing vector: Picard iteration from `p̄`.
pub fn clearing_dense(network: &DenseNetwork, tolerance: f64) -> ClearingOutcome {
    network.picard(network.total_obligations(), tolerance)
}

/// Least clearing vector: Picard iteration from zero.
pub fn least_clearing_vector(network: &DenseNetwork, tolerance: f64) -> ClearingOutcome {
    network.picard(vec![0.0; network.len()], tolerance)
}
