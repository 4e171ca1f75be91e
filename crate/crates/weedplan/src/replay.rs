//! Simulating a field read from disk.

use std::path::Path;

use weedplan_core::field::{uniformity_test, UniformityVerdict, WeedField};
use weedplan_core::sim::{run_with_clock, NoClock, PlanClock, SimulationReport};
use weedplan_core::SimulationConfig;

use crate::error::Result;
use crate::field_io::load_field;

/// Occupancy grid used for the uniformity verdict: along-track by lateral.
pub const UNIFORMITY_BINS: (usize, usize) = (4, 2);

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayReport {
    pub report: SimulationReport,
    /// `None` when the field has too few weeds for the test.
    pub uniformity: Option<UniformityVerdict>,
}

pub fn replay_real(path: impl AsRef<Path>, config: &SimulationConfig) -> Result<ReplayReport> {
    let field = load_field(path)?;
    replay_field(&field, config, &mut NoClock)
}

/// Runs `config` on `field`; the field's lane width replaces the rig's.
pub fn replay_field(
    field: &WeedField,
    config: &SimulationConfig,
    clock: &mut dyn PlanClock,
) -> Result<ReplayReport> {
    let mut config = *config;
    config.rig.lane_width_m = field.lane_width_m();
    let report = run_with_clock(field, &config, clock)?;
    let uniformity = match uniformity_test(field, UNIFORMITY_BINS.0, UNIFORMITY_BINS.1) {
        Ok(v) => Some(v),
        Err(e) => {
            log::info!("no uniformity verdict: {e}");
            None
        }
    };
    Ok(ReplayReport { report, uniformity })
}
