//! Brute force vs nOTSP on random single-head instances.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weedplan_core::graph::{build_graph, TargetNode};
use weedplan_core::planner::{plan_brute_force, plan_notsp, PlanStart};
use weedplan_core::{Kinematics, PlantInstance};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchReport {
    pub num_nodes: usize,
    pub trials: usize,
    pub brute_force_median_s: f64,
    pub notsp_median_s: f64,
    /// brute force over nOTSP
    pub ratio: f64,
}

/// `n` weeds spread over one 0.78 m segment of a 1.3 m lane, nodes in graph
/// order, with the head starting mid-lane just behind the first weed.
pub fn random_instance(n: usize, rng: &mut impl Rng) -> (Vec<TargetNode>, PlanStart) {
    let weeds: Vec<PlantInstance> = (0..n)
        .map(|i| {
            PlantInstance::weed(
                i as u64,
                rng.random_range(0.0..0.78),
                rng.random_range(0.0..1.3),
            )
        })
        .collect();
    let graph = build_graph(&weeds, Kinematics::default());
    (graph.nodes().to_vec(), PlanStart { x: -0.1, y: 0.65 })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Times both planners on `trials` instances of `n` nodes. Fails with the
/// planner's size error when `n` exceeds the brute-force cap.
pub fn bench(n: usize, trials: usize, seed: u64) -> Result<BenchReport> {
    let trials = trials.max(1);
    let kin = Kinematics::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut bf, mut dp) = (Vec::with_capacity(trials), Vec::with_capacity(trials));
    for _ in 0..trials {
        let (nodes, start) = random_instance(n, &mut rng);

        let t = Instant::now();
        let a = plan_brute_force(&nodes, start, kin, 0)?;
        bf.push(t.elapsed().as_secs_f64());

        let t = Instant::now();
        let b = plan_notsp(&nodes, start, kin, 0)?;
        dp.push(t.elapsed().as_secs_f64());

        debug_assert_eq!(a.visited_count, b.visited_count);
    }
    let brute_force_median_s = median(&mut bf);
    let notsp_median_s = median(&mut dp);
    Ok(BenchReport {
        num_nodes: n,
        trials,
        brute_force_median_s,
        notsp_median_s,
        ratio: brute_force_median_s / notsp_median_s.max(1e-9),
    })
}

pub fn render(r: &BenchReport) -> String {
    format!(
        "planner      n   trials  median_s\n\
         brute_force  {n:<3} {t:<7} {bf:.9}\n\
         notsp        {n:<3} {t:<7} {dp:.9}\n\
         ratio={ratio:.1}\n",
        n = r.num_nodes,
        t = r.trials,
        bf = r.brute_force_median_s,
        dp = r.notsp_median_s,
        ratio = r.ratio
    )
}
