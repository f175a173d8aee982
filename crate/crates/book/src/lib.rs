//! The guide in `book/`, compiled as documentation so its snippets run as
//! doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/calibration.md")]
pub mod calibration {}

#[doc = include_str!("../../../book/src/network.md")]
pub mod network {}

#[doc = include_str!("../../../book/src/shocks.md")]
pub mod shocks {}

#[doc = include_str!("../../../book/src/clearing.md")]
pub mod clearing {}

#[doc = include_str!("../../../book/src/risk-measures.md")]
pub mod risk_measures {}

#[doc = include_str!("../../../book/src/frontier.md")]
pub mod frontier {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
