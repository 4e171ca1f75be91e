//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weedplan::bench::bench;
use weedplan::config::SweepConfig;
use weedplan::field_io::save_field;
use weedplan::replay::replay_real;
use weedplan::sweep::{results_csv, sweep, CellResult, SweepOptions};
use weedplan_core::field::{generate_field, uniformity_test, FieldParams};
use weedplan_core::graph::build_graph;
use weedplan_core::kinematics::feasible;
use weedplan_core::planner::{plan_brute_force, plan_notsp, PlanStart};
use weedplan_core::sim::run;
use weedplan_core::{Kinematics, PlantInstance, Provenance, SimulationConfig, Strategy, WeedField};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// The full density x head-count x strategy grid, 20 seeds per cell.
struct Grid {
    cells: Vec<CellResult>,
    csv: String,
}

impl Grid {
    fn loss(&self, density: f64, heads: usize, strategy: Strategy) -> f64 {
        self.cells
            .iter()
            .find(|c| {
                c.cell.density == density
                    && c.cell.num_heads == heads
                    && c.cell.strategy == strategy
            })
            .expect("cell present")
            .loss()
            .0
    }
}

fn oracle_equivalence() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let kin = Kinematics::default();
    for case in 0..1000 {
        let n = rng.random_range(0..=8);
        let weeds: Vec<PlantInstance> = (0..n)
            .map(|i| {
                PlantInstance::weed(i, rng.random_range(0.0..0.78), rng.random_range(0.0..1.3))
            })
            .collect();
        let graph = build_graph(&weeds, kin);
        let start = PlanStart {
            x: rng.random_range(-0.2..0.0),
            y: rng.random_range(0.0..1.3),
        };
        let bf = plan_brute_force(graph.nodes(), start, kin, 0).map_err(|e| e.to_string())?;
        let dp = plan_notsp(graph.nodes(), start, kin, 0).map_err(|e| e.to_string())?;
        let tol = 1e-9 * bf.movement_cost.abs().max(1e-12);
        if bf.visited_count != dp.visited_count || (bf.movement_cost - dp.movement_cost).abs() > tol
        {
            return Err(format!(
                "case {case}: brute force {}/{:.12} vs nOTSP {}/{:.12}",
                bf.visited_count, bf.movement_cost, dp.visited_count, dp.movement_cost
            ));
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, format!("1000 instances agree in {secs:.2} s"))
}

fn head_count_monotonicity(grid: &Grid) -> Check {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = String::new();
    for &density in &[3.0, 5.0, 10.0, 20.0, 40.0] {
        for s in Strategy::ALL {
            let l: Vec<f64> = [1, 2, 4, 8]
                .iter()
                .map(|&h| grid.loss(density, h, s))
                .collect();
            for (i, w) in l.windows(2).enumerate() {
                let rise = w[1] - w[0];
                if rise > worst {
                    worst = rise;
                    worst_at = format!("lambda={density} {s} H {}->{}", 1 << i, 2 << i);
                }
            }
        }
    }
    ensure(
        worst <= 1.0,
        format!("largest rise {worst:.3} pp at {worst_at}"),
    )
}

fn spot_value(grid: &Grid) -> Check {
    let l = grid.loss(40.0, 8, Strategy::Distance);
    ensure(
        (5.0..=25.0).contains(&l),
        format!("lambda=40 H=8 D loss {l:.2} %"),
    )
}

fn distance_degrades(grid: &Grid) -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for h in [4, 8] {
        let d = grid.loss(40.0, h, Strategy::Distance);
        let sd = grid.loss(40.0, h, Strategy::StaticDivision);
        let dd = grid.loss(40.0, h, Strategy::DynamicDivision);
        ok &= d >= sd && d >= dd;
        parts.push(format!("H={h}: D {d:.2} SD {sd:.2} DD {dd:.2}"));
    }
    ensure(ok, parts.join("; "))
}

/// Weeds at the lambda=10 rate along x, squeezed into the band y in [0.5, 0.7].
fn clustered_field(seed: u64) -> WeedField {
    let base = generate_field(&FieldParams {
        density: 10.0,
        seed,
        ..FieldParams::default()
    })
    .unwrap();
    let plants = base
        .weeds()
        .map(|w| PlantInstance {
            y: 0.5 + w.y * (0.2 / base.lane_width_m()),
            ..w.clone()
        })
        .collect();
    WeedField::new(1.3, base.length_m(), 3, plants, Provenance::Ingested).unwrap()
}

fn clustered_travel() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut sums: HashMap<Strategy, f64> = HashMap::new();
    let seeds = 0..5u64;
    for seed in seeds.clone() {
        let path = dir.path().join(format!("clustered_{seed}.csv"));
        save_field(&clustered_field(seed), &path).map_err(|e| e.to_string())?;
        for s in Strategy::ALL {
            let config = SimulationConfig {
                strategy: s,
                ..SimulationConfig::default()
            };
            let r = replay_real(&path, &config).map_err(|e| e.to_string())?;
            *sums.entry(s).or_default() += r.report.travel_mean_m;
        }
    }
    let n = seeds.end as f64;
    let sd = sums[&Strategy::StaticDivision] / n;
    let d = sums[&Strategy::Distance] / n;
    let dd = sums[&Strategy::DynamicDivision] / n;
    ensure(
        sd > dd && sd > d,
        format!("mean per-head travel SD {sd:.3} m, D {d:.3} m, DD {dd:.3} m"),
    )
}

fn runtime_gap() -> Check {
    let t = Instant::now();
    let r = bench(10, 3, 0).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    ensure(
        r.ratio >= 100.0 && secs < 120.0,
        format!(
            "N=10 brute force {:.3e} s, nOTSP {:.3e} s, ratio {:.0} ({secs:.1} s)",
            r.brute_force_median_s, r.notsp_median_s, r.ratio
        ),
    )
}

fn generator_statistics() -> Check {
    let f = generate_field(&FieldParams {
        density: 10.0,
        length_m: 200.0,
        seed: 0,
        ..FieldParams::default()
    })
    .unwrap();
    let xs: Vec<f64> = f.weeds().map(|w| w.x).collect();
    let mut prev = 0.0;
    let mean_gap = xs
        .iter()
        .map(|&x| {
            let g = x - prev;
            prev = x;
            g
        })
        .sum::<f64>()
        / xs.len() as f64;
    let expected = 1.0 / (10.0 * 1.3);
    let gap_err = (mean_gap / expected - 1.0).abs();

    let mut uniform = 0;
    for seed in 0..100 {
        let f = generate_field(&FieldParams {
            density: 10.0,
            seed,
            ..FieldParams::default()
        })
        .unwrap();
        if uniformity_test(&f, 4, 2)
            .map_err(|e| e.to_string())?
            .uniform_at_5pct
        {
            uniform += 1;
        }
    }
    ensure(
        gap_err < 0.05 && uniform >= 95,
        format!(
            "mean gap {mean_gap:.5} m vs {expected:.5} m ({:.2} % off); uniform in {uniform}/100 seeds",
            100.0 * gap_err
        ),
    )
}

fn conservation_and_determinism(grid: &Grid, again: &Grid) -> Check {
    let mut runs = 0;
    for c in &grid.cells {
        for (seed, r) in &c.runs {
            let r = r.as_ref().map_err(|e| format!("seed {seed} failed: {e}"))?;
            if r.sprayed + r.missed != r.total {
                return Err(format!(
                    "{:?} seed {seed}: {} + {} != {}",
                    c.cell, r.sprayed, r.missed, r.total
                ));
            }
            runs += 1;
        }
    }
    ensure(
        grid.csv == again.csv,
        format!(
            "{runs} runs conserve weeds; repeated Results CSV identical ({} bytes)",
            grid.csv.len()
        ),
    )
}

fn zero_cases() -> Check {
    let config = SimulationConfig::default();
    let empty = generate_field(&FieldParams {
        density: 0.0,
        ..FieldParams::default()
    })
    .unwrap();
    let r = run(&empty, &config).map_err(|e| e.to_string())?;
    let empty_ok = r.loss_pct == 0.0 && r.per_head_travel_m.iter().all(|&t| t == 0.0);

    let y = config.rig.rest_positions()[2];
    let single = WeedField::new(
        1.3,
        20.0,
        3,
        vec![PlantInstance::weed(0, 5.0, y)],
        Provenance::Ingested,
    )
    .unwrap();
    let r1 = run(&single, &config).map_err(|e| e.to_string())?;
    let single_ok = r1.sprayed == 1 && r1.per_head_travel_m.iter().all(|&t| t == 0.0);
    ensure(
        empty_ok && single_ok,
        format!(
            "empty field loss {} travel {:?}; single weed sprayed {} travel {:?}",
            r.loss_pct, r.per_head_travel_m, r1.sprayed, r1.per_head_travel_m
        ),
    )
}

fn feasibility_predicate() -> Check {
    let table = [
        feasible(0.2, 1.3, 0.5, 5.0),
        !feasible(0.1, 1.3, 0.5, 5.0),
        feasible(0.0, 0.0, 0.5, 5.0),
        feasible(3.7, 0.0, 0.5, 5.0),
    ];
    if !table.iter().all(|&b| b) {
        return Err(format!("tabulated examples: {table:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..10_000 {
        let dx = rng.random_range(0.0..2.0);
        let dy = rng.random_range(0.0..2.0);
        let g = rng.random_range(0.01..2.0);
        let t = rng.random_range(0.1..10.0);
        let k = rng.random_range(0.01..100.0);
        if feasible(dx, dy, k * g, k * t) != feasible(dx, dy, g, t) {
            return Err(format!(
                "sample {i}: dx={dx} dy={dy} gamma={g} theta={t} k={k}"
            ));
        }
    }
    Ok("tabulated examples hold; scale law holds on 10000 samples".into())
}

fn standard_grid() -> Grid {
    let config = SweepConfig::default();
    let cells = sweep(&config, &SweepOptions::default()).expect("grid sweep runs");
    let csv = results_csv(&cells);
    Grid { cells, csv }
}

fn main() -> ExitCode {
    let t = Instant::now();
    let grid = standard_grid();
    let again = standard_grid();
    eprintln!(
        "grid of {} cells swept twice in {:.1} s",
        grid.cells.len(),
        t.elapsed().as_secs_f64()
    );

    let results: Vec<(&str, Check)> = vec![
        ("1 oracle equivalence", oracle_equivalence()),
        ("2 head-count monotonicity", head_count_monotonicity(&grid)),
        ("3 spot value", spot_value(&grid)),
        ("4 distance-based degradation", distance_degrades(&grid)),
        ("5 clustered travel ordering", clustered_travel()),
        ("6 planner runtime gap", runtime_gap()),
        ("7 generator statistics", generator_statistics()),
        (
            "8 conservation and determinism",
            conservation_and_determinism(&grid, &again),
        ),
        ("9 zero cases", zero_cases()),
        ("10 feasibility predicate", feasibility_predicate()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
