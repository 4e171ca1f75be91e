//! Splitting a segment's targets among the heads.
//!
//! * Distance (D): each target goes to the laterally closest head.
//! * Static division (SD): the lane is cut into `H` equal strips, one per head.
//! * Dynamic division (DD): the strip `[y_min, y_max]` actually occupied by the
//!   segment's targets is cut into `H` equal strips.
//!
//! Every strategy yields a partition of the graph's nodes. Node lists keep the
//! graph order, so x is non-decreasing within each head's list.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::TargetGraph;
use crate::kinematics::{rest_positions, HeadState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Distance,
    StaticDivision,
    DynamicDivision,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::Distance,
        Strategy::StaticDivision,
        Strategy::DynamicDivision,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Distance => "D",
            Strategy::StaticDivision => "SD",
            Strategy::DynamicDivision => "DD",
        }
    }
}

impl core::fmt::Display for Strategy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "D" | "d" | "distance" => Ok(Strategy::Distance),
            "SD" | "sd" | "static" => Ok(Strategy::StaticDivision),
            "DD" | "dd" | "dynamic" => Ok(Strategy::DynamicDivision),
            _ => Err(Error::param("strategy", "expected D, SD or DD")),
        }
    }
}

/// Lateral strip `[lo, hi)` owned by a head; the last strip is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadAssignment {
    pub strategy: Strategy,
    /// Node ids per head, in graph (spatial) order.
    pub per_head: Vec<Vec<usize>>,
    /// Strip per head for SD and DD, `None` for D or an empty DD segment.
    pub region_bounds: Option<Vec<Region>>,
}

impl HeadAssignment {
    pub fn num_heads(&self) -> usize {
        self.per_head.len()
    }

    /// Head owning `node_id`, if any.
    pub fn owner(&self, node_id: usize) -> Option<usize> {
        self.per_head.iter().position(|l| l.contains(&node_id))
    }

    /// Per-node owner lookup table.
    pub fn owners(&self, num_nodes: usize) -> Vec<usize> {
        let mut owners = vec![usize::MAX; num_nodes];
        for (h, list) in self.per_head.iter().enumerate() {
            for &n in list {
                owners[n] = h;
            }
        }
        owners
    }
}

/// Dispatches to the strategy's assignment rule.
///
/// `heads` supplies the positions used by D; SD and DD only use its length.
pub fn assign(
    strategy: Strategy,
    graph: &TargetGraph,
    heads: &[HeadState],
    lane_width_m: f64,
) -> HeadAssignment {
    match strategy {
        Strategy::Distance => assign_distance(graph, heads),
        Strategy::StaticDivision => assign_static_division(graph, heads.len(), lane_width_m),
        Strategy::DynamicDivision => assign_dynamic_division(graph, heads.len(), lane_width_m),
    }
}

/// Nearest head by lateral distance; ties go to the lower head index.
pub fn assign_distance(graph: &TargetGraph, heads: &[HeadState]) -> HeadAssignment {
    assert!(!heads.is_empty(), "at least one head is required");
    let mut per_head = vec![Vec::new(); heads.len()];
    for node in graph.nodes() {
        per_head[nearest(heads.iter().map(|h| h.y_position), node.y)].push(node.node_id);
    }
    HeadAssignment {
        strategy: Strategy::Distance,
        per_head,
        region_bounds: None,
    }
}

pub fn assign_static_division(
    graph: &TargetGraph,
    num_heads: usize,
    lane_width_m: f64,
) -> HeadAssignment {
    assert!(num_heads > 0, "at least one head is required");
    let mut per_head = vec![Vec::new(); num_heads];
    for node in graph.nodes() {
        per_head[strip_index(node.y, 0.0, lane_width_m, num_heads)].push(node.node_id);
    }
    HeadAssignment {
        strategy: Strategy::StaticDivision,
        per_head,
        region_bounds: Some(strips(0.0, lane_width_m, num_heads)),
    }
}

/// Divides the occupied strip `[y_min, y_max]` evenly among the heads.
///
/// With a single target, or all targets on one line, the whole segment goes
/// to the head whose rest position is nearest; the other heads stay idle.
pub fn assign_dynamic_division(
    graph: &TargetGraph,
    num_heads: usize,
    lane_width_m: f64,
) -> HeadAssignment {
    assert!(num_heads > 0, "at least one head is required");
    let mut per_head = vec![Vec::new(); num_heads];
    let nodes = graph.nodes();
    if nodes.is_empty() {
        return HeadAssignment {
            strategy: Strategy::DynamicDivision,
            per_head,
            region_bounds: None,
        };
    }
    let (y_min, y_max) = nodes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), n| {
            (lo.min(n.y), hi.max(n.y))
        });

    if nodes.len() <= 1 || y_max == y_min {
        let head = nearest(rest_positions(num_heads, lane_width_m).into_iter(), y_min);
        per_head[head] = nodes.iter().map(|n| n.node_id).collect();
        let bounds = (0..num_heads)
            .map(|h| {
                let hi = if h == head { y_max } else { y_min };
                Region { lo: y_min, hi }
            })
            .collect();
        return HeadAssignment {
            strategy: Strategy::DynamicDivision,
            per_head,
            region_bounds: Some(bounds),
        };
    }

    for node in nodes {
        per_head[strip_index(node.y, y_min, y_max, num_heads)].push(node.node_id);
    }
    HeadAssignment {
        strategy: Strategy::DynamicDivision,
        per_head,
        region_bounds: Some(strips(y_min, y_max, num_heads)),
    }
}

fn nearest(positions: impl Iterator<Item = f64>, y: f64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in positions.enumerate() {
        let d = (p - y).abs();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

fn strip_index(y: f64, lo: f64, hi: f64, n: usize) -> usize {
    let idx = libm::floor((y - lo) * n as f64 / (hi - lo));
    if idx <= 0.0 {
        0
    } else {
        (idx as usize).min(n - 1)
    }
}

fn strips(lo: f64, hi: f64, n: usize) -> Vec<Region> {
    let w = (hi - lo) / n as f64;
    (0..n)
        .map(|i| Region {
            lo: lo + i as f64 * w,
            hi: if i + 1 == n {
                hi
            } else {
                lo + (i + 1) as f64 * w
            },
        })
        .collect()
}
