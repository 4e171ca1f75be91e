use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weedplan::config::SweepConfig;
use weedplan::field_io::{load_field, save_field};
use weedplan::sweep::{results_csv, sweep, SweepOptions};
use weedplan::{bench, formats, manifest::RunManifest, replay, Error};
use weedplan_core::field::{generate_field, FieldParams};
use weedplan_core::planner::PlanStart;
use weedplan_core::sim::{plan_segment, NoClock, PlanSetup};
use weedplan_core::{PlannerKind, SimulationConfig, Strategy};

/// Selective weeding planner: fields, segment plans, simulations and sweeps.
#[derive(Parser)]
#[command(name = "weedplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic field and write it as Field CSV.
    Generate(GenerateArgs),
    /// Plan one segment of a field and print the per-head plans.
    Plan(PlanArgs),
    /// Simulate a pass over a field file.
    Replay(ReplayArgs),
    /// Run a grid of simulations described by a config file.
    Sweep(SweepArgs),
    /// Time brute force against nOTSP on random instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Weeds per square metre.
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 20.0)]
    length: f64,
    #[arg(long, default_value_t = 1.3)]
    lane_width: f64,
    #[arg(long, default_value_t = 3)]
    rows: u32,
    #[arg(long, default_value_t = 0.15)]
    crop_spacing: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct RigArgs {
    /// Number of heads.
    #[arg(short = 'H', long = "heads", default_value_t = 4)]
    heads: usize,
    #[arg(long, default_value = "SD")]
    strategy: Strategy,
    #[arg(long, default_value = "notsp")]
    planner: PlannerKind,
    /// Robot speed, m/s.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Head speed, m/s.
    #[arg(long, default_value_t = 5.0)]
    theta: f64,
}

impl RigArgs {
    fn sim_config(&self, lane_width_m: f64) -> SimulationConfig {
        let mut c = SimulationConfig::default();
        c.rig.num_heads = self.heads;
        c.rig.lane_width_m = lane_width_m;
        c.rig.head_max_velocity = self.theta;
        c.robot_speed = self.gamma;
        c.strategy = self.strategy;
        c.planner = self.planner;
        c.max_plan_nodes = c.max_plan_nodes.min(self.planner.max_nodes());
        c
    }
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    field: PathBuf,
    /// Segment index along the lane.
    #[arg(long, default_value_t = 0)]
    segment: usize,
    #[command(flatten)]
    rig: RigArgs,
    /// Also print the target graph's links.
    #[arg(long)]
    edges: bool,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    field: PathBuf,
    #[command(flatten)]
    rig: RigArgs,
    /// Write the JSON-lines event log here.
    #[arg(long)]
    events: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory for results.csv and manifest.json.
    #[arg(short, long)]
    out: PathBuf,
    /// Worker threads; defaults to the number of logical processors.
    #[arg(long)]
    jobs: Option<usize>,
    /// Record planning wall time (makes results.csv non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Targets per instance.
    #[arg(short, long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn cmd_generate(a: GenerateArgs) -> Result<(), Error> {
    let field = generate_field(&FieldParams {
        density: a.lambda,
        length_m: a.length,
        lane_width_m: a.lane_width,
        num_crop_rows: a.rows,
        crop_spacing_m: a.crop_spacing,
        seed: a.seed,
    })?;
    save_field(&field, &a.out)?;
    log::info!(
        "wrote {} plants to {}",
        field.plants().len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_plan(a: PlanArgs) -> Result<(), Error> {
    let field = load_field(&a.field)?;
    let config = a.rig.sim_config(field.lane_width_m());
    config.validate()?;
    let weeds = field
        .weeds()
        .filter(|w| config.segment_of(w.x) == a.segment);
    let mut anchors: Vec<PlanStart> = config
        .rig
        .rest_positions()
        .into_iter()
        .map(|y| PlanStart {
            x: f64::NEG_INFINITY,
            y,
        })
        .collect();
    let setup = PlanSetup {
        strategy: config.strategy,
        planner: config.planner,
        kin: config.kinematics(),
        lane_width_m: config.rig.lane_width_m,
        max_plan_nodes: None,
    };
    let start_x = config.toolline_x(config.activation_step(a.segment));
    let plan = plan_segment(weeds, &mut anchors, start_x, &setup)?;
    let mut out = String::new();
    if a.edges {
        out.push_str(&formats::graph_edge_list(&plan.graph));
    }
    out.push_str(&formats::plan_dump(&plan));
    print!("{out}");
    Ok(())
}

fn cmd_replay(a: ReplayArgs) -> Result<(), Error> {
    let field = load_field(&a.field)?;
    let config = a.rig.sim_config(field.lane_width_m());
    let r = replay::replay_field(&field, &config, &mut NoClock)?;
    let rep = &r.report;
    let travel: Vec<String> = rep
        .per_head_travel_m
        .iter()
        .map(|t| format!("{t:.6}"))
        .collect();
    println!(
        "total={} sprayed={} missed={}",
        rep.total_weeds, rep.sprayed, rep.missed
    );
    println!("loss_pct={:.6}", rep.loss_pct);
    println!(
        "travel_m=[{}] mean={:.6} std={:.6}",
        travel.join(","),
        rep.travel_mean_m,
        rep.travel_std_m
    );
    match r.uniformity {
        Some(v) => println!(
            "uniformity chi2={:.6} dof={} critical={:.6} p={:.6} uniform={}",
            v.statistic, v.degrees_of_freedom, v.critical_value, v.p_value, v.uniform_at_5pct
        ),
        None => println!("uniformity=insufficient_data"),
    }
    if let Some(path) = &a.events {
        let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        formats::write_events(&mut w, &rep.event_log)
            .and_then(|_| w.flush())
            .map_err(|e| io_error(path, e))?;
    }
    Ok(())
}

fn io_error(path: &std::path::Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<bool, Error> {
    let config = SweepConfig::load(&a.config)?;
    fs::create_dir_all(&a.out).map_err(|e| io_error(&a.out, e))?;
    let options = SweepOptions {
        jobs: a.jobs,
        timing: a.timing,
    };
    log::info!(
        "{} runs over {} cells",
        config.run_count(),
        config.cell_count()
    );
    let results = sweep(&config, &options)?;
    let csv_path = a.out.join("results.csv");
    fs::write(&csv_path, results_csv(&results)).map_err(|e| io_error(&csv_path, e))?;
    RunManifest::new(&a.config, &config, &a.out, a.jobs, a.timing)
        .write(&a.out.join("manifest.json"))?;
    let ok = results.iter().filter(|c| c.is_ok()).count();
    if ok < results.len() {
        log::warn!("{} of {} cells failed", results.len() - ok, results.len());
    }
    Ok(ok > 0)
}

fn cmd_bench(a: BenchArgs) -> Result<(), Error> {
    let r = bench::bench(a.n, a.trials, a.seed)?;
    print!("{}", bench::render(&r));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WEEDPLAN_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Sweep(a) => match cmd_sweep(a) {
            Ok(true) => Ok(()),
            Ok(false) => {
                eprintln!("error: every cell failed");
                return ExitCode::from(1);
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
