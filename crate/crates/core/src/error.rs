use alloc::string::String;

use crate::planner::PlannerKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("plant {id} at (x={x}, y={y}) lies outside the field bounds")]
    OutOfBounds { id: u64, x: f64, y: f64 },

    #[error("uniformity test needs at least {required} weeds, found {found}")]
    InsufficientData { required: usize, found: usize },

    #[error("weed at x={weed_x} is already behind the tool line at x={toolline_x}")]
    PastTarget { weed_x: f64, toolline_x: f64 },

    #[error("{planner} planner accepts at most {max} targets per head, got {found}{}",
        if *.planner == PlannerKind::BruteForce { "; use the notsp planner" } else { "; split the segment" })]
    TooManyTargets {
        planner: PlannerKind,
        max: usize,
        found: usize,
    },

    #[error("no candidate trajectories to select from")]
    NoCandidates,

    #[error("invalid simulation config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Rejects NaN/inf and values not strictly positive.
pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::param(name, "must be finite"));
    }
    if value <= 0.0 {
        return Err(Error::param(name, "must be > 0"));
    }
    Ok(())
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::param(name, "must be finite"));
    }
    if value < 0.0 {
        return Err(Error::param(name, "must be >= 0"));
    }
    Ok(())
}
