//! Text dumps used for golden tests and the event log.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;
use weedplan_core::graph::TargetGraph;
use weedplan_core::sim::{Event, SegmentPlan};
use weedplan_core::Trajectory;

/// One line per link: `j -> k [cost=ρ, feasible=0|1]`.
pub fn graph_edge_list(graph: &TargetGraph) -> String {
    let mut out = String::new();
    for (j, k) in graph.links() {
        let cost = graph.cost(j, k).unwrap();
        let ok = graph.link_feasible(j, k).unwrap();
        writeln!(
            out,
            "{j} -> {k} [cost={cost:.6}, feasible={}]",
            u8::from(ok)
        )
        .unwrap();
    }
    out
}

/// `head=<i> visits=<k> cost=<f> order=[id,...] mask=[0|1,...]`, ids are plant ids.
pub fn trajectory_line(t: &Trajectory, graph: &TargetGraph) -> String {
    let order: Vec<String> = t
        .visit_order
        .iter()
        .map(|&n| graph.node(n).plant_id.to_string())
        .collect();
    let mask: Vec<&str> = t
        .feasible_mask
        .iter()
        .map(|&b| if b { "1" } else { "0" })
        .collect();
    format!(
        "head={} visits={} cost={:.6} order=[{}] mask=[{}]",
        t.head_index,
        t.visited_count,
        t.movement_cost,
        order.join(","),
        mask.join(",")
    )
}

/// Per-head lines followed by `visited=<v>/<total>`.
pub fn plan_dump(plan: &SegmentPlan) -> String {
    let mut out = String::new();
    for t in &plan.trajectories {
        out.push_str(&trajectory_line(t, &plan.graph));
        out.push('\n');
    }
    writeln!(out, "visited={}/{}", plan.visited_count(), plan.graph.len()).unwrap();
    out
}

pub const EVENT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
struct EventRecord<'a> {
    v: u32,
    t_s: f64,
    head: usize,
    node: u64,
    outcome: &'a str,
    head_y: f64,
    weed_y: f64,
}

pub fn event_json(e: &Event) -> String {
    serde_json::to_string(&EventRecord {
        v: EVENT_SCHEMA_VERSION,
        t_s: e.time_s,
        head: e.head,
        node: e.plant_id,
        outcome: e.outcome.as_str(),
        head_y: e.head_y,
        weed_y: e.weed_y,
    })
    .expect("event records always serialize")
}

pub fn write_events<W: Write>(mut w: W, events: &[Event]) -> std::io::Result<()> {
    for e in events {
        writeln!(w, "{}", event_json(e))?;
    }
    Ok(())
}
