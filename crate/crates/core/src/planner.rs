//! Per-head route planning.
//!
//! A head starts at `PlanStart` (the tool-line x at which it becomes free and
//! its lateral position) and visits a subset of its assigned targets. A visit
//! order is scored by scanning it greedily ([`prune_infeasible`]): a node is
//! visited when it lies strictly ahead of the last visited x and is reachable
//! from the last visited y; otherwise it is skipped and the head stays put.
//! Plans are ranked by visited count, then by movement cost (squared lateral
//! steps including the approach from the start), then lexicographically by
//! visit order.
//!
//! Two planners are provided. [`plan_brute_force`] scores all `N!` orders.
//! [`plan_notsp`] runs a dynamic program over visited subsets: since moves
//! only go forward along the spatial order, the last node of a visited set is
//! its highest-ranked member and one table entry per subset suffices. Both
//! return the same visited count and cost.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::TargetNode;
use crate::kinematics::Kinematics;

pub const BRUTE_FORCE_MAX_NODES: usize = 10;
pub const NOTSP_MAX_NODES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlannerKind {
    BruteForce,
    Notsp,
}

impl PlannerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::BruteForce => "brute_force",
            PlannerKind::Notsp => "notsp",
        }
    }

    pub fn max_nodes(self) -> usize {
        match self {
            PlannerKind::BruteForce => BRUTE_FORCE_MAX_NODES,
            PlannerKind::Notsp => NOTSP_MAX_NODES,
        }
    }
}

impl core::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for PlannerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute_force" | "brute-force" => Ok(PlannerKind::BruteForce),
            "notsp" => Ok(PlannerKind::Notsp),
            _ => Err(Error::param("planner", "expected brute_force or notsp")),
        }
    }
}

/// Where a head is when it starts a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanStart {
    /// Field x at the tool line when the head becomes free.
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub head_index: usize,
    /// Node ids, a permutation of the planned nodes.
    pub visit_order: Vec<usize>,
    pub feasible_mask: Vec<bool>,
    pub visited_count: usize,
    pub movement_cost: f64,
    pub planner: PlannerKind,
}

impl Trajectory {
    pub fn empty(head_index: usize, planner: PlannerKind) -> Self {
        Trajectory {
            head_index,
            visit_order: Vec::new(),
            feasible_mask: Vec::new(),
            visited_count: 0,
            movement_cost: 0.0,
            planner,
        }
    }

    /// Node ids that are actually visited, in order.
    pub fn visited(&self) -> impl Iterator<Item = usize> + '_ {
        self.visit_order
            .iter()
            .zip(&self.feasible_mask)
            .filter(|(_, &ok)| ok)
            .map(|(&id, _)| id)
    }
}

/// Squared lateral steps from `start_y` through `ys`.
pub fn movement_cost<I: IntoIterator<Item = f64>>(start_y: f64, ys: I) -> f64 {
    let mut cost = 0.0;
    let mut prev = start_y;
    for y in ys {
        let d = prev - y;
        cost += d * d;
        prev = y;
    }
    cost
}

/// Greedy scan of `order`; returns the visit mask and visited count.
pub fn prune_infeasible(
    order: &[TargetNode],
    start: PlanStart,
    kin: Kinematics,
) -> (Vec<bool>, usize) {
    let mut mask = Vec::with_capacity(order.len());
    let mut cur = start;
    let mut count = 0;
    for n in order {
        let ok = n.x > cur.x && kin.feasible(n.x - cur.x, (n.y - cur.y).abs());
        if ok {
            cur = PlanStart { x: n.x, y: n.y };
            count += 1;
        }
        mask.push(ok);
    }
    (mask, count)
}

/// Ranks `a` against `b`; `Less` means `a` is the better plan.
fn rank(a_visits: usize, a_cost: f64, b_visits: usize, b_cost: f64) -> Ordering {
    b_visits
        .cmp(&a_visits)
        .then_with(|| a_cost.total_cmp(&b_cost))
}

/// Most visits, then lowest cost, then smallest visit order.
pub fn select_trajectory(candidates: Vec<Trajectory>) -> Result<Trajectory> {
    candidates
        .into_iter()
        .min_by(|a, b| {
            rank(
                a.visited_count,
                a.movement_cost,
                b.visited_count,
                b.movement_cost,
            )
            .then_with(|| a.visit_order.cmp(&b.visit_order))
        })
        .ok_or(Error::NoCandidates)
}

pub fn plan(
    kind: PlannerKind,
    nodes: &[TargetNode],
    start: PlanStart,
    kin: Kinematics,
    head_index: usize,
) -> Result<Trajectory> {
    match kind {
        PlannerKind::BruteForce => plan_brute_force(nodes, start, kin, head_index),
        PlannerKind::Notsp => plan_notsp(nodes, start, kin, head_index),
    }
}

/// Scores every permutation of `nodes` regardless of link direction.
///
/// Permutations are generated in lexicographic node-id order and a candidate
/// only replaces the incumbent when strictly better, so ties resolve to the
/// smallest order.
pub fn plan_brute_force(
    nodes: &[TargetNode],
    start: PlanStart,
    kin: Kinematics,
    head_index: usize,
) -> Result<Trajectory> {
    let n = nodes.len();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooManyTargets {
            planner: PlannerKind::BruteForce,
            max: BRUTE_FORCE_MAX_NODES,
            found: n,
        });
    }
    if n == 0 {
        return Ok(Trajectory::empty(head_index, PlannerKind::BruteForce));
    }

    let mut sorted: Vec<TargetNode> = nodes.to_vec();
    sorted.sort_by_key(|t| t.node_id);

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best_visits = 0;
    let mut best_cost = f64::INFINITY;
    loop {
        let (visits, cost) = score(&sorted, &perm, start, kin);
        if rank(visits, cost, best_visits, best_cost) == Ordering::Less {
            best_visits = visits;
            best_cost = cost;
            best_perm.copy_from_slice(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let order: Vec<TargetNode> = best_perm.iter().map(|&i| sorted[i]).collect();
    let (mask, visited_count) = prune_infeasible(&order, start, kin);
    let movement_cost = movement_cost(
        start.y,
        order
            .iter()
            .zip(&mask)
            .filter(|(_, &ok)| ok)
            .map(|(t, _)| t.y),
    );
    Ok(Trajectory {
        head_index,
        visit_order: order.iter().map(|t| t.node_id).collect(),
        feasible_mask: mask,
        visited_count,
        movement_cost,
        planner: PlannerKind::BruteForce,
    })
}

/// Same scan as [`prune_infeasible`] without allocating.
fn score(nodes: &[TargetNode], perm: &[usize], start: PlanStart, kin: Kinematics) -> (usize, f64) {
    let (mut cx, mut cy) = (start.x, start.y);
    let mut visits = 0;
    let mut cost = 0.0;
    for &i in perm {
        let t = &nodes[i];
        let dy = cy - t.y;
        if t.x > cx && kin.feasible(t.x - cx, dy.abs()) {
            cost += dy * dy;
            cx = t.x;
            cy = t.y;
            visits += 1;
        }
    }
    (visits, cost)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exact open-path planner over visited subsets.
///
/// Nodes are ranked in spatial order. `cost[S]` holds the movement cost of
/// visiting exactly the nodes of `S` in rank order, or `INFINITY` when that
/// chain breaks the reachability rule. `S` extends `S \ {last}` where `last`
/// is the highest-ranked member, so each entry is filled from one predecessor.
/// The best entry by (popcount, cost) is the plan.
pub fn plan_notsp(
    nodes: &[TargetNode],
    start: PlanStart,
    kin: Kinematics,
    head_index: usize,
) -> Result<Trajectory> {
    let n = nodes.len();
    if n > NOTSP_MAX_NODES {
        return Err(Error::TooManyTargets {
            planner: PlannerKind::Notsp,
            max: NOTSP_MAX_NODES,
            found: n,
        });
    }
    if n == 0 {
        return Ok(Trajectory::empty(head_index, PlannerKind::Notsp));
    }

    let mut ranked: Vec<TargetNode> = nodes.to_vec();
    ranked.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.y.total_cmp(&b.y))
            .then(a.node_id.cmp(&b.node_id))
    });

    let size = 1usize << n;
    let mut cost = alloc::vec![f64::INFINITY; size];
    cost[0] = 0.0;
    let mut best_mask = 0usize;
    let mut best_order: Option<Vec<usize>> = None;

    for mask in 1..size {
        let last = (usize::BITS - 1 - mask.leading_zeros()) as usize;
        let prev_mask = mask ^ (1 << last);
        let base = cost[prev_mask];
        if base == f64::INFINITY {
            continue;
        }
        let (px, py) = if prev_mask == 0 {
            (start.x, start.y)
        } else {
            let p = &ranked[(usize::BITS - 1 - prev_mask.leading_zeros()) as usize];
            (p.x, p.y)
        };
        let t = &ranked[last];
        let dy = py - t.y;
        if !(t.x > px && kin.feasible(t.x - px, dy.abs())) {
            continue;
        }
        let c = base + dy * dy;
        cost[mask] = c;

        let visits = mask.count_ones() as usize;
        let best_visits = best_mask.count_ones() as usize;
        match rank(visits, c, best_visits, cost[best_mask]) {
            Ordering::Less => {
                best_mask = mask;
                best_order = None;
            }
            Ordering::Equal => {
                let incumbent = best_order.get_or_insert_with(|| order_for(&ranked, best_mask));
                let candidate = order_for(&ranked, mask);
                if candidate < *incumbent {
                    best_mask = mask;
                    *incumbent = candidate;
                }
            }
            Ordering::Greater => {}
        }
    }

    let chain = (0..n).filter(|i| best_mask & (1 << i) != 0);
    let rest = (0..n).filter(|i| best_mask & (1 << i) == 0);
    let visit_order: Vec<usize> = chain.chain(rest).map(|i| ranked[i].node_id).collect();
    let visited_count = best_mask.count_ones() as usize;
    let feasible_mask = (0..n).map(|i| i < visited_count).collect();
    Ok(Trajectory {
        head_index,
        visit_order,
        feasible_mask,
        visited_count,
        movement_cost: cost[best_mask],
        planner: PlannerKind::Notsp,
    })
}

/// Visit order reported for a chain: chain nodes then the skipped ones.
fn order_for(ranked: &[TargetNode], mask: usize) -> Vec<usize> {
    let n = ranked.len();
    (0..n)
        .filter(|i| mask & (1 << i) != 0)
        .chain((0..n).filter(|i| mask & (1 << i) == 0))
        .map(|i| ranked[i].node_id)
        .collect()
}
