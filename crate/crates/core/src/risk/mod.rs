//! Real-economy losses, their Monte Carlo distribution, the three bailout
//! criteria and the search for minimal bailouts.

mod frontier;
mod loss;
mod measures;
mod montecarlo;
mod summary;

pub use frontier::{
    bailout_frontier, bailout_frontiers, minimal_total_bailout, Frontier, FrontierPoint, FrontierSettings,
    MinimalBailout,
};
pub use loss::{green_line_loss, loss_from_tiers, real_economy_loss, BailoutAllocation, LossConfig, LossSample};
pub use measures::{
    average_var, criterion_satisfied, exceedance_probability, expected_loss, quantile, Criterion,
};
pub use montecarlo::{prepare_scenario, run_monte_carlo, simulate_clearings};
pub use summary::LossSummary;
