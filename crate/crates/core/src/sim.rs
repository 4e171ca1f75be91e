//! Discrete-time simulation of one pass over a field.
//!
//! Geometry, in field coordinates along the driving direction: at `t = 0`
//! the camera's leading edge is at `x = 0`, its bottom edge at
//! `-camera_view_depth_m` and the tool line a further `camera_tool_gap_m`
//! behind. Everything advances at `robot_speed`.
//!
//! Weeds are batched into segments of `segment_length_m` along x. Segment `k`
//! (weeds with `k * S <= x < (k + 1) * S`) is complete once the leading edge
//! reaches `(k + 1) * S`; it is then assigned and planned in zero time and the
//! resulting plans are handed to the heads `latency_budget_s` later. A head
//! works through its queue in x order, sliding towards the front target and
//! holding there until the target crosses the tool line. A weed is sprayed
//! when its head has stayed within half a footprint of it for the whole
//! actuation latency up to that instant.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::assignment::{assign, HeadAssignment, Strategy};
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::field::{PlantInstance, WeedField};
use crate::graph::{build_graph, TargetGraph};
use crate::kinematics::{HeadState, Kinematics, MotionProfile, ToolRig};
use crate::planner::{plan, PlanStart, PlannerKind, Trajectory};

/// Slack for turning continuous instants into step indices.
const STEP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub rig: ToolRig,
    /// m/s
    pub robot_speed: f64,
    pub strategy: Strategy,
    pub planner: PlannerKind,
    pub segment_length_m: f64,
    /// Along-track extent of the camera view.
    pub camera_view_depth_m: f64,
    /// Detection, management and planning time, lumped.
    pub latency_budget_s: f64,
    pub time_step_s: f64,
    pub motion_profile: MotionProfile,
    /// Per-head targets above this are planned in consecutive x-ordered chunks.
    pub max_plan_nodes: usize,
    /// Seed of the generated field this config is paired with.
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            rig: ToolRig::default(),
            robot_speed: 0.5,
            strategy: Strategy::StaticDivision,
            planner: PlannerKind::Notsp,
            segment_length_m: 0.78,
            camera_view_depth_m: 0.78,
            latency_budget_s: 0.2,
            time_step_s: 0.001,
            motion_profile: MotionProfile::ConstantVelocity,
            max_plan_nodes: 16,
            seed: 0,
        }
    }
}

impl SimulationConfig {
    pub fn kinematics(&self) -> Kinematics {
        Kinematics {
            robot_speed: self.robot_speed,
            head_speed: self.rig.head_max_velocity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.rig.validate()?;
        check_positive("robot_speed", self.robot_speed)?;
        check_positive("segment_length_m", self.segment_length_m)?;
        check_positive("camera_view_depth_m", self.camera_view_depth_m)?;
        check_positive("time_step_s", self.time_step_s)?;
        check_non_negative("latency_budget_s", self.latency_budget_s)?;
        if self.segment_length_m > self.camera_view_depth_m {
            return Err(Error::Config(format!(
                "segment_length_m ({}) exceeds camera_view_depth_m ({})",
                self.segment_length_m, self.camera_view_depth_m
            )));
        }
        let budget = self.rig.camera_tool_gap_m / self.robot_speed;
        if self.latency_budget_s > budget + STEP_EPS {
            return Err(Error::Config(format!(
                "latency_budget_s ({}) exceeds camera_tool_gap_m / robot_speed ({budget})",
                self.latency_budget_s
            )));
        }
        let cap = self.planner.max_nodes();
        if self.max_plan_nodes == 0 || self.max_plan_nodes > cap {
            return Err(Error::Config(format!(
                "max_plan_nodes must lie in 1..={cap} for the {} planner",
                self.planner
            )));
        }
        Ok(())
    }

    fn validate_for(&self, field: &WeedField) -> Result<()> {
        self.validate()?;
        if (field.lane_width_m() - self.rig.lane_width_m).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "field lane width {} does not match rig lane width {}",
                field.lane_width_m(),
                self.rig.lane_width_m
            )));
        }
        Ok(())
    }

    /// Tool-line x at step `n`.
    pub fn toolline_x(&self, step: u64) -> f64 {
        -(self.camera_view_depth_m + self.rig.camera_tool_gap_m)
            + self.robot_speed * self.time_step_s * step as f64
    }

    /// Segment index of a weed at `x`.
    pub fn segment_of(&self, x: f64) -> usize {
        let k = libm::floor(x / self.segment_length_m);
        if k <= 0.0 {
            0
        } else {
            k as usize
        }
    }

    /// Step at which segment `k` is complete and gets planned.
    pub fn close_step(&self, segment: usize) -> u64 {
        let edge = (segment + 1) as f64 * self.segment_length_m;
        steps_ceil(edge / (self.robot_speed * self.time_step_s))
    }

    /// Step at which the plans for segment `k` reach the heads.
    pub fn activation_step(&self, segment: usize) -> u64 {
        self.close_step(segment) + steps_ceil(self.latency_budget_s / self.time_step_s)
    }

    fn latency_steps(&self) -> usize {
        steps_ceil(self.rig.actuation_latency_s / self.time_step_s) as usize
    }
}

fn steps_ceil(v: f64) -> u64 {
    let c = libm::ceil(v - STEP_EPS);
    if c <= 0.0 {
        0
    } else {
        c as u64
    }
}

/// Inputs shared by every segment plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSetup {
    pub strategy: Strategy,
    pub planner: PlannerKind,
    pub kin: Kinematics,
    pub lane_width_m: f64,
    /// `None` plans each head's targets in one go.
    pub max_plan_nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPlan {
    pub graph: TargetGraph,
    pub assignment: HeadAssignment,
    /// One or more trajectories per head, in head order.
    pub trajectories: Vec<Trajectory>,
}

impl SegmentPlan {
    pub fn visited_count(&self) -> usize {
        self.trajectories.iter().map(|t| t.visited_count).sum()
    }
}

/// Assigns and plans one segment.
///
/// `anchors[i]` is where head `i` will be once its earlier plans are done;
/// it is advanced to the last target visited by the new plan. No head starts
/// before the tool line reaches `start_x`.
pub fn plan_segment<'a, I>(
    weeds: I,
    anchors: &mut [PlanStart],
    start_x: f64,
    setup: &PlanSetup,
) -> Result<SegmentPlan>
where
    I: IntoIterator<Item = &'a PlantInstance>,
{
    let graph = build_graph(weeds, setup.kin);
    let heads: Vec<HeadState> = anchors
        .iter()
        .enumerate()
        .map(|(i, a)| HeadState::at(i, a.y))
        .collect();
    let assignment = assign(setup.strategy, &graph, &heads, setup.lane_width_m);

    let mut trajectories = Vec::new();
    for (head, ids) in assignment.per_head.iter().enumerate() {
        let nodes: Vec<_> = ids.iter().map(|&id| *graph.node(id)).collect();
        let chunk = setup.max_plan_nodes.unwrap_or(usize::MAX).max(1);
        if nodes.is_empty() {
            trajectories.push(Trajectory::empty(head, setup.planner));
            continue;
        }
        for part in nodes.chunks(chunk) {
            let anchor = &mut anchors[head];
            let start = PlanStart {
                x: anchor.x.max(start_x),
                y: anchor.y,
            };
            let t = plan(setup.planner, part, start, setup.kin, head)?;
            if let Some(last) = t.visited().last() {
                let n = graph.node(last);
                *anchor = PlanStart { x: n.x, y: n.y };
            }
            trajectories.push(t);
        }
    }
    Ok(SegmentPlan {
        graph,
        assignment,
        trajectories,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Sprayed,
    Missed,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Sprayed => "sprayed",
            Outcome::Missed => "missed",
        }
    }
}

/// One weed crossing the tool line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time_s: f64,
    pub head: usize,
    pub plant_id: u64,
    pub outcome: Outcome,
    pub head_y: f64,
    pub weed_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub total_weeds: usize,
    pub sprayed: usize,
    pub missed: usize,
    /// `100 * missed / total`, `0` for a field without weeds.
    pub loss_pct: f64,
    pub per_head_travel_m: Vec<f64>,
    pub travel_mean_m: f64,
    /// Population standard deviation over heads.
    pub travel_std_m: f64,
    pub initial_head_y: Vec<f64>,
    pub event_log: Vec<Event>,
    pub wall_clock_planning_s: f64,
}

/// Wall-clock source for timing the planner; the core has no clock of its own.
pub trait PlanClock {
    fn now_s(&mut self) -> f64;
}

/// Clock that never advances; planning time reads as zero.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoClock;

impl PlanClock for NoClock {
    fn now_s(&mut self) -> f64 {
        0.0
    }
}

struct Head {
    y: f64,
    velocity: f64,
    queue: VecDeque<usize>,
    travel: f64,
    /// Positions over the last `latency_steps + 1` steps.
    history: Vec<f64>,
}

pub fn run(field: &WeedField, config: &SimulationConfig) -> Result<SimulationReport> {
    run_with_clock(field, config, &mut NoClock)
}

pub fn run_with_clock(
    field: &WeedField,
    config: &SimulationConfig,
    clock: &mut dyn PlanClock,
) -> Result<SimulationReport> {
    config.validate_for(field)?;
    let rig = &config.rig;
    let weeds: Vec<&PlantInstance> = field.weeds().collect();
    let rest = rig.rest_positions();
    let window = config.latency_steps() + 1;
    let radius = rig.spray_footprint_m / 2.0 + 1e-12;

    let mut heads: Vec<Head> = rest
        .iter()
        .map(|&y| Head {
            y,
            velocity: 0.0,
            queue: VecDeque::new(),
            travel: 0.0,
            history: vec![y; window],
        })
        .collect();
    let mut anchors: Vec<PlanStart> = rest
        .iter()
        .map(|&y| PlanStart {
            x: f64::NEG_INFINITY,
            y,
        })
        .collect();

    let mut segments: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, w) in weeds.iter().enumerate() {
        let k = config.segment_of(w.x);
        match segments.last_mut() {
            Some((seg, members)) if *seg == k => members.push(i),
            _ => segments.push((k, vec![i])),
        }
    }

    let setup = PlanSetup {
        strategy: config.strategy,
        planner: config.planner,
        kin: config.kinematics(),
        lane_width_m: rig.lane_width_m,
        max_plan_nodes: Some(config.max_plan_nodes),
    };

    // (activation step, per-head weed indices)
    let mut pending: VecDeque<(u64, Vec<Vec<usize>>)> = VecDeque::new();
    let mut owner: Vec<Option<usize>> = vec![None; weeds.len()];
    let mut queued: Vec<bool> = vec![false; weeds.len()];
    let mut resolved: Vec<bool> = vec![false; weeds.len()];
    let mut next_segment = 0;
    let mut next_weed = 0;
    let mut events = Vec::with_capacity(weeds.len());
    let mut sprayed = 0;
    let mut planning_s = 0.0;
    let dt = config.time_step_s;

    let mut step: u64 = 0;
    while next_weed < weeds.len() {
        while next_segment < segments.len() && config.close_step(segments[next_segment].0) <= step {
            let (k, members) = &segments[next_segment];
            let t0 = clock.now_s();
            let start_x = config.toolline_x(config.activation_step(*k));
            let plan = plan_segment(
                members.iter().map(|&i| weeds[i]),
                &mut anchors,
                start_x,
                &setup,
            )?;
            planning_s += clock.now_s() - t0;

            // graph node ids follow field order within the segment
            let mut per_head = vec![Vec::new(); heads.len()];
            for (h, ids) in plan.assignment.per_head.iter().enumerate() {
                for &id in ids {
                    owner[members[id]] = Some(h);
                }
            }
            for t in &plan.trajectories {
                per_head[t.head_index].extend(t.visited().map(|id| members[id]));
            }
            pending.push_back((config.activation_step(*k), per_head));
            next_segment += 1;
        }

        while pending.front().is_some_and(|(at, _)| *at <= step) {
            let (_, per_head) = pending.pop_front().unwrap();
            for (h, list) in per_head.into_iter().enumerate() {
                for w in list {
                    if !resolved[w] {
                        queued[w] = true;
                        heads[h].queue.push_back(w);
                    }
                }
            }
        }

        let slot = (step % window as u64) as usize;
        for head in heads.iter_mut() {
            let target = head.queue.front().map(|&w| weeds[w].y);
            let before = head.y;
            move_head(head, target, config.motion_profile, rig, dt);
            head.travel += (head.y - before).abs();
            head.history[slot] = head.y;
        }

        let toolline = config.toolline_x(step);
        while next_weed < weeds.len() && weeds[next_weed].x <= toolline {
            let w = next_weed;
            let weed = weeds[w];
            let (head_idx, outcome) = if queued[w] {
                let h = owner[w].expect("queued weeds have an owner");
                let head = &mut heads[h];
                while let Some(front) = head.queue.pop_front() {
                    if front == w {
                        break;
                    }
                }
                let hit = head.history.iter().all(|&y| (y - weed.y).abs() <= radius);
                (
                    h,
                    if hit {
                        Outcome::Sprayed
                    } else {
                        Outcome::Missed
                    },
                )
            } else {
                let h = owner[w].unwrap_or_else(|| nearest_head(&heads, weed.y));
                (h, Outcome::Missed)
            };
            if outcome == Outcome::Sprayed {
                sprayed += 1;
            }
            events.push(Event {
                time_s: step as f64 * dt,
                head: head_idx,
                plant_id: weed.id,
                outcome,
                head_y: heads[head_idx].y,
                weed_y: weed.y,
            });
            resolved[w] = true;
            next_weed += 1;
        }
        step += 1;
    }

    let total = weeds.len();
    let per_head_travel_m: Vec<f64> = heads.iter().map(|h| h.travel).collect();
    let (travel_mean_m, travel_std_m) = mean_std(&per_head_travel_m);
    Ok(SimulationReport {
        total_weeds: total,
        sprayed,
        missed: total - sprayed,
        loss_pct: if total == 0 {
            0.0
        } else {
            100.0 * (total - sprayed) as f64 / total as f64
        },
        per_head_travel_m,
        travel_mean_m,
        travel_std_m,
        initial_head_y: rest,
        event_log: events,
        wall_clock_planning_s: planning_s,
    })
}

fn move_head(head: &mut Head, target: Option<f64>, profile: MotionProfile, rig: &ToolRig, dt: f64) {
    let vmax = rig.head_max_velocity;
    match profile {
        MotionProfile::ConstantVelocity => {
            if let Some(target) = target {
                let d = target - head.y;
                let step = vmax * dt;
                head.y = if d.abs() <= step {
                    target
                } else {
                    head.y + step.copysign(d)
                };
            }
        }
        MotionProfile::Trapezoidal => {
            let accel = rig.head_max_accel * dt;
            let desired = match target {
                Some(target) => {
                    let d = target - head.y;
                    let brake = libm::sqrt(2.0 * rig.head_max_accel * d.abs());
                    vmax.min(brake).copysign(d)
                }
                None => 0.0,
            };
            head.velocity += (desired - head.velocity).clamp(-accel, accel);
            let mv = head.velocity * dt;
            match target {
                Some(target) => {
                    let d = target - head.y;
                    if d == 0.0 || (mv * d > 0.0 && mv.abs() >= d.abs()) {
                        head.y = target;
                        head.velocity = 0.0;
                    } else {
                        head.y += mv;
                    }
                }
                None => head.y += mv,
            }
            head.y = head.y.clamp(0.0, rig.lane_width_m);
        }
    }
}

fn nearest_head(heads: &[Head], y: f64) -> usize {
    let mut best = 0;
    for (i, h) in heads.iter().enumerate() {
        if (h.y - y).abs() < (heads[best].y - y).abs() {
            best = i;
        }
    }
    best
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}
