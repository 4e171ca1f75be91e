//! Density x head-count x strategy x planner grids over seeds.
//!
//! Results CSV columns:
//!
//! ```text
//! lambda,H,strategy,planner,seed,total,sprayed,missed,loss_pct,travel_mean_m,travel_std_m,planning_wall_s,loss_std_pct,status
//! ```
//!
//! One row per (cell, seed), then one `seed=agg` row per cell holding the
//! means over its successful seeds and the population std of `loss_pct` in
//! `loss_std_pct`. Failed runs keep their row with empty numbers and an
//! `error: ...` status.

use std::fmt::Write as _;

use rayon::prelude::*;
use weedplan_core::field::{generate_field, FieldParams};
use weedplan_core::sim::{mean_std, run_with_clock, NoClock, PlanClock, SimulationReport};
use weedplan_core::{PlannerKind, SimulationConfig, Strategy};

use crate::config::SweepConfig;
use crate::error::{Error, Result};
use crate::StdClock;

pub const RESULTS_HEADER: &str = "lambda,H,strategy,planner,seed,total,sprayed,missed,loss_pct,\
travel_mean_m,travel_std_m,planning_wall_s,loss_std_pct,status";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub density: f64,
    pub num_heads: usize,
    pub strategy: Strategy,
    pub planner: PlannerKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub total: usize,
    pub sprayed: usize,
    pub missed: usize,
    pub loss_pct: f64,
    pub travel_mean_m: f64,
    pub travel_std_m: f64,
    pub planning_wall_s: f64,
}

impl From<&SimulationReport> for RunSummary {
    fn from(r: &SimulationReport) -> Self {
        RunSummary {
            total: r.total_weeds,
            sprayed: r.sprayed,
            missed: r.missed,
            loss_pct: r.loss_pct,
            travel_mean_m: r.travel_mean_m,
            travel_std_m: r.travel_std_m,
            planning_wall_s: r.wall_clock_planning_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub cell: Cell,
    /// In seed order; `Err` holds the failure message.
    pub runs: Vec<(u64, std::result::Result<RunSummary, String>)>,
}

impl CellResult {
    pub fn succeeded(&self) -> impl Iterator<Item = &RunSummary> {
        self.runs.iter().filter_map(|(_, r)| r.as_ref().ok())
    }

    /// Mean and population std of `loss_pct` over successful seeds.
    pub fn loss(&self) -> (f64, f64) {
        let v: Vec<f64> = self.succeeded().map(|r| r.loss_pct).collect();
        mean_std(&v)
    }

    pub fn travel_mean(&self) -> f64 {
        let v: Vec<f64> = self.succeeded().map(|r| r.travel_mean_m).collect();
        mean_std(&v).0
    }

    pub fn is_ok(&self) -> bool {
        self.runs.iter().any(|(_, r)| r.is_ok())
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker threads; `None` uses every logical processor.
    pub jobs: Option<usize>,
    /// Measure planning wall time. Off by default so output is reproducible.
    pub timing: bool,
}

/// The cells of `config` in axis order: density, heads, strategy, planner.
pub fn cells(config: &SweepConfig) -> Vec<Cell> {
    let mut out = Vec::with_capacity(config.cell_count());
    for &density in &config.densities {
        for &num_heads in &config.head_counts {
            for &strategy in &config.strategies {
                for &planner in &config.planners {
                    out.push(Cell {
                        density,
                        num_heads,
                        strategy,
                        planner,
                    });
                }
            }
        }
    }
    out
}

/// Field and simulation parameters for one run of `cell`.
pub fn run_setup(config: &SweepConfig, cell: &Cell, seed: u64) -> (FieldParams, SimulationConfig) {
    let field = FieldParams {
        density: cell.density,
        seed,
        ..config.field
    };
    let mut sim = config.sim;
    sim.rig.num_heads = cell.num_heads;
    sim.strategy = cell.strategy;
    sim.planner = cell.planner;
    sim.seed = seed;
    // the chunk size is shared by both planners; keep it within the smaller cap
    sim.max_plan_nodes = sim.max_plan_nodes.min(cell.planner.max_nodes());
    (field, sim)
}

pub fn run_cell_seed(
    config: &SweepConfig,
    cell: &Cell,
    seed: u64,
    timing: bool,
) -> Result<SimulationReport> {
    let (fp, sim) = run_setup(config, cell, seed);
    let field = generate_field(&fp)?;
    let mut std_clock = StdClock::default();
    let clock: &mut dyn PlanClock = if timing { &mut std_clock } else { &mut NoClock };
    Ok(run_with_clock(&field, &sim, clock)?)
}

pub fn sweep(config: &SweepConfig, options: &SweepOptions) -> Result<Vec<CellResult>> {
    config.check_axes()?;
    let cells = cells(config);
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| config.seeds.iter().map(move |&s| (c, s)))
        .collect();

    let work = || -> Vec<std::result::Result<RunSummary, String>> {
        jobs.par_iter()
            .map(|&(c, seed)| {
                let cell = &cells[c];
                run_cell_seed(config, cell, seed, options.timing)
                    .map(|r| RunSummary::from(&r))
                    .map_err(|e| {
                        log::warn!(
                            "lambda={} H={} {} {} seed={seed}: {e}",
                            cell.density,
                            cell.num_heads,
                            cell.strategy,
                            cell.planner
                        );
                        e.to_string()
                    })
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config {
            line: 0,
            message: format!(
                "cannot start {} worker threads: {e}",
                options.jobs.unwrap_or(0)
            ),
        })?;
    let mut outcomes = pool.install(work).into_iter();

    Ok(cells
        .into_iter()
        .map(|cell| CellResult {
            cell,
            runs: config
                .seeds
                .iter()
                .map(|&s| (s, outcomes.next().expect("one outcome per run")))
                .collect(),
        })
        .collect())
}

fn status_text(msg: &str) -> String {
    let flat: String = msg
        .chars()
        .map(|c| match c {
            ',' => ';',
            '\n' | '\r' | '"' => ' ',
            c => c,
        })
        .collect();
    format!("error: {flat}")
}

pub fn results_csv(results: &[CellResult]) -> String {
    let mut out = String::new();
    out.push_str(RESULTS_HEADER);
    out.push('\n');
    for cr in results {
        let c = &cr.cell;
        let key = format!("{},{},{},{}", c.density, c.num_heads, c.strategy, c.planner);
        for (seed, run) in &cr.runs {
            match run {
                Ok(r) => writeln!(
                    out,
                    "{key},{seed},{},{},{},{:.6},{:.6},{:.6},{:.6},,ok",
                    r.total,
                    r.sprayed,
                    r.missed,
                    r.loss_pct,
                    r.travel_mean_m,
                    r.travel_std_m,
                    r.planning_wall_s
                ),
                Err(e) => writeln!(out, "{key},{seed},,,,,,,,,{}", status_text(e)),
            }
            .unwrap();
        }
        let ok: Vec<&RunSummary> = cr.succeeded().collect();
        if ok.is_empty() {
            writeln!(out, "{key},agg,,,,,,,,,error: every seed failed").unwrap();
            continue;
        }
        let mean =
            |f: fn(&RunSummary) -> f64| mean_std(&ok.iter().map(|r| f(r)).collect::<Vec<_>>()).0;
        let (loss, loss_std) = cr.loss();
        let failed = cr.runs.len() - ok.len();
        let status = if failed == 0 {
            "ok".to_string()
        } else {
            format!("partial: {failed} of {} seeds failed", cr.runs.len())
        };
        writeln!(
            out,
            "{key},agg,{:.6},{:.6},{:.6},{loss:.6},{:.6},{:.6},{:.6},{loss_std:.6},{status}",
            mean(|r| r.total as f64),
            mean(|r| r.sprayed as f64),
            mean(|r| r.missed as f64),
            mean(|r| r.travel_mean_m),
            mean(|r| r.travel_std_m),
            mean(|r| r.planning_wall_s),
        )
        .unwrap();
    }
    out
}
