//! Forward-only target graph over the weeds of one segment.
//!
//! Nodes are kept in spatial order (ascending x, then y, then plant id). A
//! link `j -> k` exists for every pair with `j < k` in that order, so the
//! graph is the complete DAG on the spatial order and its only topological
//! order is the node order itself. Costs and feasibility flags are stored for
//! the upper triangle only.

use alloc::vec::Vec;

use crate::field::{plant_order, PlantInstance};
use crate::kinematics::Kinematics;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetNode {
    /// Index in the graph's node order.
    pub node_id: usize,
    pub plant_id: u64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostMetric {
    /// `(y_j - y_k)^2`, the heads only move laterally.
    #[default]
    LateralSq,
    /// `(x_j - x_k)^2 + (y_j - y_k)^2`
    EuclideanSq,
}

impl CostMetric {
    pub fn cost(self, a: &TargetNode, b: &TargetNode) -> f64 {
        let dy = a.y - b.y;
        match self {
            CostMetric::LateralSq => dy * dy,
            CostMetric::EuclideanSq => {
                let dx = a.x - b.x;
                dx * dx + dy * dy
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetGraph {
    nodes: Vec<TargetNode>,
    /// Row-major `n x n`; entries with `j >= k` hold `INFINITY`.
    costs: Vec<f64>,
    feasible: Vec<bool>,
    metric: CostMetric,
}

/// Builds the graph with the lateral squared cost.
pub fn build_graph<'a, I>(weeds: I, kin: Kinematics) -> TargetGraph
where
    I: IntoIterator<Item = &'a PlantInstance>,
{
    build_graph_with(weeds, kin, CostMetric::LateralSq)
}

/// Builds the graph over the weeds in `weeds`; crops are ignored.
pub fn build_graph_with<'a, I>(weeds: I, kin: Kinematics, metric: CostMetric) -> TargetGraph
where
    I: IntoIterator<Item = &'a PlantInstance>,
{
    let mut sorted: Vec<&PlantInstance> = weeds.into_iter().filter(|p| p.is_weed()).collect();
    sorted.sort_by(|a, b| plant_order(a, b));
    let nodes: Vec<TargetNode> = sorted
        .iter()
        .enumerate()
        .map(|(node_id, p)| TargetNode {
            node_id,
            plant_id: p.id,
            x: p.x,
            y: p.y,
        })
        .collect();

    let n = nodes.len();
    let mut costs = alloc::vec![f64::INFINITY; n * n];
    let mut feasible = alloc::vec![false; n * n];
    for j in 0..n {
        for k in (j + 1)..n {
            let (a, b) = (&nodes[j], &nodes[k]);
            costs[j * n + k] = metric.cost(a, b);
            feasible[j * n + k] = kin.feasible(b.x - a.x, (a.y - b.y).abs());
        }
    }
    TargetGraph {
        nodes,
        costs,
        feasible,
        metric,
    }
}

impl TargetGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[TargetNode] {
        &self.nodes
    }

    pub fn node(&self, node_id: usize) -> &TargetNode {
        &self.nodes[node_id]
    }

    pub fn metric(&self) -> CostMetric {
        self.metric
    }

    /// `Some(cost)` for an existing link `j -> k`, `None` otherwise.
    pub fn cost(&self, j: usize, k: usize) -> Option<f64> {
        self.has_link(j, k).then(|| self.costs[j * self.len() + k])
    }

    pub fn link_feasible(&self, j: usize, k: usize) -> Option<bool> {
        self.has_link(j, k)
            .then(|| self.feasible[j * self.len() + k])
    }

    pub fn has_link(&self, j: usize, k: usize) -> bool {
        j < k && k < self.len()
    }

    /// All links in row-major order.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |j| ((j + 1)..n).map(move |k| (j, k)))
    }

    pub fn link_count(&self) -> usize {
        let n = self.len();
        n * n.saturating_sub(1) / 2
    }
}
