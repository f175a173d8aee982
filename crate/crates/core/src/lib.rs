//! Interbank contagion on a three-tier banking network.
//!
//! The crate calibrates a network of one central bank, a layer of massive
//! banks and a long tail of big banks from a handful of macro constants,
//! hits it with correlated asset losses and a sovereign default, clears
//! interbank payments with proportional repayment, and measures what reaches
//! the real economy. On top of that sits a search for the smallest cash
//! injections into the non-central banks that keep losses within a risk
//! criterion.
//!
//! ```
//! use galaxy_contagion::calibration::{build_network, CalibrationParams};
//! use galaxy_contagion::network::BankTier;
//!
//! let network = build_network(&CalibrationParams::default()).unwrap();
//! assert_eq!(network.n_banks(), 17_501);
//! assert_eq!(network.outstanding_debt().value(), 515.5);
//! assert_eq!(network.profile(BankTier::Central).owed_external.value(), 2500.0);
//! ```

// NaN must fail every range check, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod clearing;
pub mod error;
pub mod money;
pub mod network;
pub mod risk;
pub mod shock;

pub use error::{Error, Result};
pub use money::Money;
