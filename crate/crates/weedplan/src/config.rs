//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. List-valued keys take
//! comma-separated values; `seeds` also accepts a half-open range `a..b`.
//! Keys mirror the simulation and field parameter names; each axis accepts
//! its singular name as well (`lambda`, `num_heads`, `strategy`, `planner`,
//! `seed`). Unset keys keep the defaults below: 5 densities by 4 head counts by 3
//! strategies, 20 seeds each.
//!
//! ```text
//! densities = 3, 5, 10, 20, 40
//! head_counts = 1, 2, 4, 8
//! strategies = D, SD, DD
//! planners = notsp
//! seeds = 0..20
//! robot_speed = 0.5
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use weedplan_core::field::FieldParams;
use weedplan_core::{PlannerKind, SimulationConfig, Strategy};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub densities: Vec<f64>,
    pub head_counts: Vec<usize>,
    pub strategies: Vec<Strategy>,
    pub planners: Vec<PlannerKind>,
    pub seeds: Vec<u64>,
    /// `density` and `seed` are replaced per run.
    pub field: FieldParams,
    /// `rig.num_heads`, `strategy`, `planner` and `seed` are replaced per run.
    pub sim: SimulationConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            densities: vec![3.0, 5.0, 10.0, 20.0, 40.0],
            head_counts: vec![1, 2, 4, 8],
            strategies: Strategy::ALL.to_vec(),
            planners: vec![PlannerKind::Notsp],
            seeds: (0..20).collect(),
            field: FieldParams::default(),
            sim: SimulationConfig::default(),
        }
    }
}

fn config_error(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

fn parse_list<T: FromStr>(line: usize, key: &str, value: &str) -> Result<Vec<T>> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(config_error(
            line,
            format!("`{key}` has an empty list entry"),
        ));
    }
    items
        .into_iter()
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| config_error(line, format!("invalid value `{s}` for `{key}`")))
        })
        .collect()
}

fn parse_one<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| config_error(line, format!("invalid value `{value}` for `{key}`")))
}

fn parse_seeds(line: usize, key: &str, value: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = value.split_once("..") {
        let a: u64 = parse_one(line, key, a.trim())?;
        let b: u64 = parse_one(line, key, b.trim())?;
        if b <= a {
            return Err(config_error(line, format!("empty seed range `{value}`")));
        }
        return Ok((a..b).collect());
    }
    parse_list(line, key, value)
}

impl SweepConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| config_error(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(config_error(line, format!("`{key}` has no value")));
            }
            let canonical = match key {
                "lambda" => "densities",
                "num_heads" => "head_counts",
                "strategy" => "strategies",
                "planner" => "planners",
                "seed" => "seeds",
                k => k,
            };
            if !seen.insert(canonical.to_string()) {
                return Err(config_error(line, format!("`{key}` is set more than once")));
            }
            let rig = &mut cfg.sim.rig;
            match canonical {
                "densities" => cfg.densities = parse_list(line, key, value)?,
                "head_counts" => cfg.head_counts = parse_list(line, key, value)?,
                "strategies" => cfg.strategies = parse_list(line, key, value)?,
                "planners" => cfg.planners = parse_list(line, key, value)?,
                "seeds" => cfg.seeds = parse_seeds(line, key, value)?,
                "lane_width_m" => {
                    let w = parse_one(line, key, value)?;
                    cfg.field.lane_width_m = w;
                    rig.lane_width_m = w;
                }
                "length_m" => cfg.field.length_m = parse_one(line, key, value)?,
                "num_crop_rows" => cfg.field.num_crop_rows = parse_one(line, key, value)?,
                "crop_spacing_m" => cfg.field.crop_spacing_m = parse_one(line, key, value)?,
                "robot_speed" => cfg.sim.robot_speed = parse_one(line, key, value)?,
                "head_max_velocity" => rig.head_max_velocity = parse_one(line, key, value)?,
                "head_max_accel" => rig.head_max_accel = parse_one(line, key, value)?,
                "spray_footprint_m" => rig.spray_footprint_m = parse_one(line, key, value)?,
                "actuation_latency_s" => rig.actuation_latency_s = parse_one(line, key, value)?,
                "camera_tool_gap_m" => rig.camera_tool_gap_m = parse_one(line, key, value)?,
                "workspace_depth_m" => rig.workspace_depth_m = parse_one(line, key, value)?,
                "segment_length_m" => cfg.sim.segment_length_m = parse_one(line, key, value)?,
                "camera_view_depth_m" => cfg.sim.camera_view_depth_m = parse_one(line, key, value)?,
                "latency_budget_s" => cfg.sim.latency_budget_s = parse_one(line, key, value)?,
                "time_step_s" => cfg.sim.time_step_s = parse_one(line, key, value)?,
                "motion_profile" => cfg.sim.motion_profile = parse_one(line, key, value)?,
                "max_plan_nodes" => cfg.sim.max_plan_nodes = parse_one(line, key, value)?,
                other => return Err(config_error(line, format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    /// Renders every key, defaults included, in a form `parse` reads back.
    pub fn render(&self) -> String {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
        }
        let rig = &self.sim.rig;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        kv("densities", join(&self.densities));
        kv("head_counts", join(&self.head_counts));
        kv("strategies", join(&self.strategies));
        kv("planners", join(&self.planners));
        kv("seeds", join(&self.seeds));
        kv("lane_width_m", self.field.lane_width_m.to_string());
        kv("length_m", self.field.length_m.to_string());
        kv("num_crop_rows", self.field.num_crop_rows.to_string());
        kv("crop_spacing_m", self.field.crop_spacing_m.to_string());
        kv("robot_speed", self.sim.robot_speed.to_string());
        kv("head_max_velocity", rig.head_max_velocity.to_string());
        kv("head_max_accel", rig.head_max_accel.to_string());
        kv("spray_footprint_m", rig.spray_footprint_m.to_string());
        kv("actuation_latency_s", rig.actuation_latency_s.to_string());
        kv("camera_tool_gap_m", rig.camera_tool_gap_m.to_string());
        kv("workspace_depth_m", rig.workspace_depth_m.to_string());
        kv("segment_length_m", self.sim.segment_length_m.to_string());
        kv(
            "camera_view_depth_m",
            self.sim.camera_view_depth_m.to_string(),
        );
        kv("latency_budget_s", self.sim.latency_budget_s.to_string());
        kv("time_step_s", self.sim.time_step_s.to_string());
        kv("motion_profile", self.sim.motion_profile.to_string());
        kv("max_plan_nodes", self.sim.max_plan_nodes.to_string());
        out
    }

    /// Number of (cell, seed) runs.
    pub fn run_count(&self) -> usize {
        self.cell_count() * self.seeds.len()
    }

    pub fn cell_count(&self) -> usize {
        self.densities.len() * self.head_counts.len() * self.strategies.len() * self.planners.len()
    }

    /// Checks the axes are non-empty.
    pub fn check_axes(&self) -> Result<()> {
        for (name, empty) in [
            ("densities", self.densities.is_empty()),
            ("head_counts", self.head_counts.is_empty()),
            ("strategies", self.strategies.is_empty()),
            ("planners", self.planners.is_empty()),
            ("seeds", self.seeds.is_empty()),
        ] {
            if empty {
                return Err(config_error(0, format!("`{name}` is empty")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use weedplan_core::MotionProfile;

    #[test]
    fn defaults_are_the_standard_grid() {
        let c = SweepConfig::parse("").unwrap();
        assert_eq!(c.cell_count(), 60);
        assert_eq!(c.run_count(), 1200);
        assert_eq!(c.sim.robot_speed, 0.5);
        assert_eq!(c.sim.rig.head_max_velocity, 5.0);
        assert_eq!(c.field.length_m, 20.0);
    }

    #[test]
    fn parses_lists_ranges_and_aliases() {
        let c = SweepConfig::parse(
            "# one cell\nlambda = 10\nnum_heads=4\nstrategy = DD\nplanner = brute_force\nseeds = 3..6\n\
             motion_profile = trapezoidal\nlane_width_m = 1.5\n",
        )
        .unwrap();
        assert_eq!(c.densities, vec![10.0]);
        assert_eq!(c.head_counts, vec![4]);
        assert_eq!(c.strategies, vec![Strategy::DynamicDivision]);
        assert_eq!(c.planners, vec![PlannerKind::BruteForce]);
        assert_eq!(c.seeds, vec![3, 4, 5]);
        assert_eq!(c.sim.motion_profile, MotionProfile::Trapezoidal);
        assert_eq!(c.sim.rig.lane_width_m, 1.5);
        assert_eq!(c.field.lane_width_m, 1.5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("densities = 3\nfoo = 1\n", 2),
            ("\n\nrobot_speed = fast\n", 3),
            ("strategies = D, XX\n", 1),
            ("no equals sign\n", 1),
            ("seeds = 5..5\n", 1),
            ("lambda = 3\ndensities = 4\n", 2),
            ("densities = 3,,4\n", 1),
            ("time_step_s =\n", 1),
        ];
        for (text, line) in cases {
            match SweepConfig::parse(text) {
                Err(Error::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn render_parses_back() {
        let mut c = SweepConfig {
            densities: vec![2.5, 40.0],
            seeds: vec![9, 1],
            ..SweepConfig::default()
        };
        c.sim.latency_budget_s = 0.125;
        c.sim.rig.camera_tool_gap_m = 0.6;
        assert_eq!(SweepConfig::parse(&c.render()).unwrap(), c);
    }
}
