use std::path::Path;
use std::process::{Command, Output};

use weedplan::field_io::load_field;

fn weedplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weedplan"))
        .args(args)
        .env_remove("WEEDPLAN_LOG")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn generate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let o = weedplan(&[
        "generate",
        "--lambda",
        "10",
        "--length",
        "20",
        "--lane-width",
        "1.3",
        "--rows",
        "3",
        "--seed",
        "7",
        "-o",
        path(&f),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let field = load_field(&f).unwrap();
    assert_eq!(field.seed(), Some(7));
    assert_eq!(field.density_param(), Some(10.0));
    assert!(field.weed_count() > 0);
}

#[test]
fn generate_lambda_zero_is_crops_only() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let o = weedplan(&["generate", "--lambda", "0", "-o", path(&f)]);
    assert!(o.status.success());
    let field = load_field(&f).unwrap();
    assert_eq!(field.weed_count(), 0);
    assert!(!field.plants().is_empty());
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let o = weedplan(&["generate", "--length", "20", "-o", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--lambda"));
}

#[test]
fn version_flag() {
    let o = weedplan(&["--version"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn plan_empty_segment() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    std::fs::write(
        &f,
        "# lane_width_m=1.3,length_m=5,num_crop_rows=3\n0,weed,x,3.0,0.5,0\n",
    )
    .unwrap();
    let o = weedplan(&["plan", "--field", path(&f), "--segment", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("visited=0/0\n"), "{}", stdout(&o));
}

#[test]
fn plan_brute_force_over_cap_recommends_notsp() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let mut text = String::from("# lane_width_m=1.3,length_m=5,num_crop_rows=3\n");
    for i in 0..12 {
        text.push_str(&format!("{i},weed,x,{},0.6,0\n", 0.05 + 0.05 * i as f64));
    }
    std::fs::write(&f, text).unwrap();
    let o = weedplan(&[
        "plan",
        "--field",
        path(&f),
        "--planner",
        "brute_force",
        "-H",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("notsp"), "{}", stderr(&o));

    let o = weedplan(&["plan", "--field", path(&f), "--planner", "notsp", "-H", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("visited=12/12\n"), "{}", stdout(&o));
}

#[test]
fn plan_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    assert!(weedplan(&[
        "generate",
        "--lambda",
        "20",
        "--length",
        "5",
        "--seed",
        "3",
        "-o",
        path(&f)
    ])
    .status
    .success());
    let args = [
        "plan",
        "--field",
        path(&f),
        "--segment",
        "2",
        "--strategy",
        "DD",
        "--edges",
    ];
    let a = weedplan(&args);
    let b = weedplan(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains(" -> "));
    assert!(stdout(&a).contains("head=3 "));
}

#[test]
fn replay_writes_events() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.csv");
    let ev = dir.path().join("events.jsonl");
    assert!(weedplan(&[
        "generate",
        "--lambda",
        "10",
        "--length",
        "5",
        "-o",
        path(&f)
    ])
    .status
    .success());
    let o = weedplan(&["replay", "--field", path(&f), "--events", path(&ev)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let total: usize = stdout(&o)
        .lines()
        .next()
        .unwrap()
        .strip_prefix("total=")
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    let events = std::fs::read_to_string(&ev).unwrap();
    assert_eq!(events.lines().count(), total);
    assert!(events.lines().all(|l| l.starts_with(r#"{"v":1,"#)));
}

#[test]
fn malformed_config_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "densities = 3\n\nhead_counts = two\n").unwrap();
    let o = weedplan(&[
        "sweep",
        "--config",
        path(&cfg),
        "-o",
        path(&dir.path().join("out")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn one_cell_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        "densities = 10\nhead_counts = 4\nstrategies = SD\nplanners = notsp\nseeds = 0\nlength_m = 5\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = weedplan(&[
        "sweep",
        "--config",
        path(&cfg),
        "-o",
        path(&out),
        "--jobs",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("results.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("lambda,H,strategy,planner,seed,"));
    assert!(lines[1].starts_with("10,4,SD,notsp,0,"));
    assert!(lines[2].starts_with("10,4,SD,notsp,agg,"));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["resolved_config"]
        .as_str()
        .unwrap()
        .contains("length_m = 5"));

    // rerun with the same config: identical results
    let out2 = dir.path().join("out2");
    assert!(
        weedplan(&["sweep", "--config", path(&cfg), "-o", path(&out2)])
            .status
            .success()
    );
    assert_eq!(
        csv,
        std::fs::read_to_string(out2.join("results.csv")).unwrap()
    );
}

#[test]
fn sweep_with_every_cell_failing_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        "densities = 5\nhead_counts = 8\nstrategies = D\nseeds = 0\nspray_footprint_m = 0.5\n",
    )
    .unwrap();
    let o = weedplan(&[
        "sweep",
        "--config",
        path(&cfg),
        "-o",
        path(&dir.path().join("out")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_sizes() {
    let o = weedplan(&["bench", "-n", "4", "--trials", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("ratio="));
    let o = weedplan(&["bench", "-n", "11"]);
    assert_eq!(o.status.code(), Some(1));
    let o = weedplan(&["bench", "-n", "four"]);
    assert_eq!(o.status.code(), Some(2));
}
