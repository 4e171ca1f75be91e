//! nOTSP against exhaustive search on random small instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weedplan_core::graph::build_graph;
use weedplan_core::planner::{plan_brute_force, plan_notsp, PlanStart};
use weedplan_core::{Kinematics, PlantInstance};

#[test]
fn notsp_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..1000 {
        let n = rng.random_range(0..=8);
        // coarse grids make ties in x, y and cost common
        let coarse = case % 4 == 0;
        let weeds: Vec<PlantInstance> = (0..n)
            .map(|i| {
                let (x, y) = if coarse {
                    (
                        rng.random_range(0..6) as f64 * 0.1,
                        rng.random_range(0..4) as f64 * 0.4,
                    )
                } else {
                    (rng.random_range(0.0..0.78), rng.random_range(0.0..1.3))
                };
                PlantInstance::weed(i, x, y)
            })
            .collect();
        let kin = Kinematics {
            robot_speed: rng.random_range(0.1..1.0),
            head_speed: rng.random_range(0.5..8.0),
        };
        let graph = build_graph(&weeds, kin);
        let start = PlanStart {
            x: rng.random_range(-0.3..0.1),
            y: rng.random_range(0.0..1.3),
        };
        let bf = plan_brute_force(graph.nodes(), start, kin, 0).unwrap();
        let dp = plan_notsp(graph.nodes(), start, kin, 0).unwrap();
        assert_eq!(bf.visited_count, dp.visited_count, "case {case}");
        let tol = 1e-9 * bf.movement_cost.abs().max(1e-12);
        assert!(
            (bf.movement_cost - dp.movement_cost).abs() <= tol,
            "case {case}: {} vs {}",
            bf.movement_cost,
            dp.movement_cost
        );
    }
}
