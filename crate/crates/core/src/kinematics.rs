//! Rig geometry and reachability.
//!
//! The robot drives forward at constant speed `robot_speed`. Each head slides
//! laterally at up to `head_speed`. A head can meet a weed that lies `dx`
//! ahead of it (along the driving direction) and `dy` to the side when the
//! lateral move finishes before the robot covers `dx`:
//!
//! ```text
//! robot_speed / head_speed < dx / dy
//! ```
//!
//! [`feasible`] evaluates the cross-multiplied form so that `dy = 0` is well
//! defined.

use alloc::vec::Vec;

use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::field::PlantInstance;

/// Robot forward speed and maximum lateral head speed, both in m/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub robot_speed: f64,
    pub head_speed: f64,
}

impl Default for Kinematics {
    fn default() -> Self {
        Kinematics {
            robot_speed: 0.5,
            head_speed: 5.0,
        }
    }
}

impl Kinematics {
    pub fn feasible(&self, dx: f64, dy: f64) -> bool {
        feasible(dx, dy, self.robot_speed, self.head_speed)
    }
}

/// Geometry and limits of the intervention heads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToolRig {
    pub num_heads: usize,
    pub lane_width_m: f64,
    /// m/s
    pub head_max_velocity: f64,
    /// m/s²
    pub head_max_accel: f64,
    /// Diameter of the sprayed ground circle.
    pub spray_footprint_m: f64,
    /// Nozzle on/off time; a head must hold over a weed this long.
    pub actuation_latency_s: f64,
    /// Gap between the camera's bottom edge and the tool line.
    pub camera_tool_gap_m: f64,
    pub workspace_depth_m: f64,
}

impl Default for ToolRig {
    fn default() -> Self {
        ToolRig {
            num_heads: 4,
            lane_width_m: 1.3,
            head_max_velocity: 5.0,
            head_max_accel: 10.0,
            spray_footprint_m: 0.05,
            actuation_latency_s: 0.012,
            camera_tool_gap_m: 0.5,
            workspace_depth_m: 0.36,
        }
    }
}

impl ToolRig {
    pub fn validate(&self) -> Result<()> {
        if self.num_heads == 0 {
            return Err(Error::param("num_heads", "must be >= 1"));
        }
        check_positive("lane_width_m", self.lane_width_m)?;
        check_positive("head_max_velocity", self.head_max_velocity)?;
        check_positive("head_max_accel", self.head_max_accel)?;
        check_positive("spray_footprint_m", self.spray_footprint_m)?;
        check_non_negative("actuation_latency_s", self.actuation_latency_s)?;
        check_non_negative("camera_tool_gap_m", self.camera_tool_gap_m)?;
        check_positive("workspace_depth_m", self.workspace_depth_m)?;
        if self.spray_footprint_m > self.lane_width_m / self.num_heads as f64 {
            return Err(Error::param(
                "spray_footprint_m",
                "must not exceed lane_width_m / num_heads",
            ));
        }
        Ok(())
    }

    /// Rest positions at the centers of the static sub-divisions.
    pub fn rest_positions(&self) -> Vec<f64> {
        rest_positions(self.num_heads, self.lane_width_m)
    }
}

pub fn rest_positions(num_heads: usize, lane_width_m: f64) -> Vec<f64> {
    let width = lane_width_m / num_heads as f64;
    (0..num_heads).map(|i| (i as f64 + 0.5) * width).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeadState {
    pub head_index: usize,
    pub y_position: f64,
    pub busy_until: f64,
}

impl HeadState {
    pub fn at(head_index: usize, y_position: f64) -> Self {
        HeadState {
            head_index,
            y_position,
            busy_until: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState {
    pub forward_speed: f64,
    pub x_position: f64,
    pub toolline_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MotionProfile {
    #[default]
    ConstantVelocity,
    Trapezoidal,
}

impl MotionProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            MotionProfile::ConstantVelocity => "constant_velocity",
            MotionProfile::Trapezoidal => "trapezoidal",
        }
    }
}

impl core::fmt::Display for MotionProfile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for MotionProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant_velocity" => Ok(MotionProfile::ConstantVelocity),
            "trapezoidal" => Ok(MotionProfile::Trapezoidal),
            _ => Err(Error::param(
                "motion_profile",
                "expected `constant_velocity` or `trapezoidal`",
            )),
        }
    }
}

pub fn lateral_distance(head: &HeadState, weed: &PlantInstance) -> f64 {
    (head.y_position - weed.y).abs()
}

/// Strict reachability test `robot_speed * dy < head_speed * dx`.
///
/// A target with no lateral offset is always reachable.
pub fn feasible(dx: f64, dy: f64, robot_speed: f64, head_speed: f64) -> bool {
    if dy == 0.0 {
        return dx >= 0.0;
    }
    robot_speed * dy < head_speed * dx
}

/// Time to move a head `dy` meters from rest to rest.
pub fn head_travel_time(dy: f64, max_velocity: f64, max_accel: f64, profile: MotionProfile) -> f64 {
    match profile {
        MotionProfile::ConstantVelocity => dy / max_velocity,
        MotionProfile::Trapezoidal => {
            if dy >= max_velocity * max_velocity / max_accel {
                dy / max_velocity + max_velocity / max_accel
            } else {
                2.0 * libm::sqrt(dy / max_accel)
            }
        }
    }
}

/// Time until `weed` reaches the tool line.
pub fn weed_arrival_time(weed: &PlantInstance, robot: &RobotState) -> Result<f64> {
    if weed.x < robot.toolline_x {
        return Err(Error::PastTarget {
            weed_x: weed.x,
            toolline_x: robot.toolline_x,
        });
    }
    Ok((weed.x - robot.toolline_x) / robot.forward_speed)
}
