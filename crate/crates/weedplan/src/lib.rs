//! IO, batch experiments and command-line plumbing around `weedplan-core`.
//!
//! * [`field_io`]: the Field CSV format
//! * [`formats`]: graph edge lists, plan dumps and the JSON-lines event log
//! * [`config`]: the flat `key = value` sweep configuration
//! * [`sweep`]: density x head-count grids and the Results CSV
//! * [`replay`]: simulating an ingested field plus its uniformity verdict
//! * [`bench`]: brute-force vs nOTSP timing

pub mod bench;
pub mod config;
mod error;
pub mod field_io;
pub mod formats;
pub mod manifest;
pub mod replay;
pub mod sweep;

pub use error::{Error, Result};

/// Wall clock backed by `std::time::Instant`.
#[derive(Debug)]
pub struct StdClock(std::time::Instant);

impl Default for StdClock {
    fn default() -> Self {
        StdClock(std::time::Instant::now())
    }
}

impl weedplan_core::sim::PlanClock for StdClock {
    fn now_s(&mut self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
