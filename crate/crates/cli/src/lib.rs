//! Configuration, run orchestration and CSV reports behind the
//! `galaxy-contagion` binary.

// NaN must fail every range check, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_calibrate, cmd_frontier, cmd_simulate};
pub use config::RunConfig;
pub use error::CliError;

/// Runs `f` on a dedicated pool of `threads` workers. Results never depend
/// on the worker count.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} worker threads: {e}")))?;
    Ok(pool.install(f))
}
