//! Planning core for multi-axis selective weed sprayers.
//!
//! A row of weeds passes under a robot moving at constant forward speed. A
//! bank of linear actuators, each carrying one spray head, slides laterally
//! across the lane to meet weeds at the tool line. This crate holds the pure
//! parts of that stack:
//!
//! * [`field`]: synthetic Poisson weed fields and a chi-squared uniformity test
//! * [`kinematics`]: tool rig geometry and the reachability predicate
//! * [`graph`]: the forward-only target graph over one segment of weeds
//! * [`assignment`]: distance, static-division and dynamic-division assignment
//! * [`planner`]: brute-force and bitmask dynamic-programming route planners
//! * [`sim`]: the discrete-time pass simulator producing loss and travel figures
//!
//! The crate is `no_std` and only needs `alloc`. File formats, sweeps and the
//! command line live in the `weedplan` crate.

#![no_std]

extern crate alloc;

pub mod assignment;
mod error;
pub mod field;
pub mod graph;
pub mod kinematics;
pub mod planner;
pub mod sim;
pub mod stats;

pub use assignment::{HeadAssignment, Strategy};
pub use error::{Error, Result};
pub use field::{FieldParams, PlantInstance, PlantKind, Provenance, WeedField};
pub use graph::{CostMetric, TargetGraph, TargetNode};
pub use kinematics::{HeadState, Kinematics, MotionProfile, RobotState, ToolRig};
pub use planner::{PlanStart, PlannerKind, Trajectory};
pub use sim::{Event, Outcome, SimulationConfig, SimulationReport};
