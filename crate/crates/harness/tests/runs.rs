use std::path::Path;

use igd_harness::config::SweepConfig;
use igd_harness::runner::{execute, ProfileFile, SUMMARY_HEADER};
use igd_harness::{run_single, run_sweep, ExperimentConfig};

fn config(budgets: &str, iterations: usize) -> ExperimentConfig {
    let text = format!(
        "[instance]\nplayers = 5\nbudgets = {budgets}\n[solver]\nmu = 1e-3\niterations = {iterations}\nrecord_every = 50\n"
    );
    ExperimentConfig::from_toml(&text, Path::new("t.toml")).unwrap()
}

fn well_formed(path: &Path) -> roxmltree::Document<'static> {
    let text = std::fs::read_to_string(path).unwrap();
    let leaked: &'static str = Box::leak(text.into_boxed_str());
    roxmltree::Document::parse(leaked).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn single_run_writes_four_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let record = run_single(&config("[2, 3, 4, 6, 9]", 200), dir.path()).unwrap();
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["metrics.svg", "profile.toml", "spider.svg", "trajectory.csv"]);
    assert_eq!(record.dir, dir.path());
    well_formed(&record.spider);
    well_formed(&record.metrics);
}

#[test]
fn zero_iterations_give_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let record = run_single(&config("[13]", 0), dir.path()).unwrap();
    let csv = std::fs::read_to_string(&record.trajectory).unwrap();
    assert_eq!(csv.lines().count(), 2);
    let profile = ProfileFile::load(&record.profile).unwrap();
    assert!(profile.best.is_none());
    assert_eq!(record.initial_gap, record.final_gap);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let mut cfg = config("[2, 3, 4, 6, 9]", 300);
    cfg.solver.init = igd_harness::config::InitKind::Dirichlet;
    cfg.solver.seed = 3;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_single(&cfg, a.path()).unwrap();
    let rb = run_single(&cfg, b.path()).unwrap();
    assert_eq!(ra.fingerprint, rb.fingerprint);
    for name in ["trajectory.csv", "profile.toml", "spider.svg", "metrics.svg"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    cfg.solver.seed = 4;
    let c = tempfile::tempdir().unwrap();
    let rc = run_single(&cfg, c.path()).unwrap();
    assert_ne!(ra.fingerprint, rc.fingerprint);
    assert_ne!(
        std::fs::read(a.path().join("trajectory.csv")).unwrap(),
        std::fs::read(c.path().join("trajectory.csv")).unwrap()
    );
}

#[test]
fn spider_polygons_follow_the_final_profile() {
    let dir = tempfile::tempdir().unwrap();
    let (record, outcome) = execute(&config("[13]", 2000), dir.path()).unwrap();
    let doc = well_formed(&record.spider);
    let polygons: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("polygon") && n.attribute("fill-opacity").is_some())
        .collect();
    assert_eq!(polygons.len(), 5);
    let labels: Vec<&str> = doc
        .descendants()
        .filter(|n| n.has_tag_name("text"))
        .filter_map(|n| n.text())
        .collect();
    for name in ["R1", "R2", "R3", "HW"] {
        assert!(labels.contains(&name));
    }
    // Everyone on HW: every polygon collapses onto the HW axis (the left spoke).
    let hw_tip: Vec<f64> = {
        let x = outcome.final_state.x.strategies()[0][3];
        assert!(x > 0.99);
        polygons[0]
            .attribute("points")
            .unwrap()
            .split(' ')
            .nth(3)
            .unwrap()
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect()
    };
    let center_x = 180.0;
    assert!(hw_tip[0] < center_x - 160.0);
}

#[test]
fn metric_curves_only_use_trajectory_points() {
    let dir = tempfile::tempdir().unwrap();
    let (record, outcome) = execute(&config("[2, 3, 4, 6, 9]", 500), dir.path()).unwrap();
    let doc = well_formed(&record.metrics);
    let lines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let count = line.attribute("points").unwrap().split(' ').count();
        assert_eq!(count, outcome.trajectory.len());
    }
}

#[test]
fn sweep_summary_and_failures() {
    let mut cfg = config("[13]", 100);
    cfg.sweep = Some(SweepConfig {
        // Budget 1 leaves every player without a feasible route, so the gap
        // computation fails for those runs.
        gas: Some(vec![1.0, 3.0, 13.0]),
        mu: Some(vec![1e-3, 1e-2]),
        ..Default::default()
    });
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_sweep(&cfg, dir.path(), Some(2)).unwrap();
    assert_eq!(outcome.records.len(), 4);
    assert_eq!(outcome.failures.len(), 2);
    let summary = std::fs::read_to_string(&outcome.summary).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    assert_eq!(lines.len(), 1 + 4);
    let failures = std::fs::read_to_string(&outcome.failures_file).unwrap();
    assert_eq!(failures.lines().count(), 1 + 2);
    assert!(failures.contains("run-000") && failures.contains("run-001"));
    well_formed(&outcome.overlay);
    for (point, _) in &outcome.records {
        assert!(dir.path().join(point.dir_name()).join("trajectory.csv").exists());
    }
}

#[test]
fn single_point_sweep_matches_single_run() {
    let mut cfg = config("[3]", 200);
    cfg.sweep = Some(SweepConfig {
        gas: Some(vec![6.0]),
        ..Default::default()
    });
    let sweep_dir = tempfile::tempdir().unwrap();
    let outcome = run_sweep(&cfg, sweep_dir.path(), Some(1)).unwrap();

    let mut single = config("[6]", 200);
    single.sweep = None;
    let run_dir = tempfile::tempdir().unwrap();
    let record = run_single(&single, run_dir.path()).unwrap();

    assert_eq!(outcome.records[0].1.fingerprint, record.fingerprint);
    assert_eq!(
        std::fs::read(&outcome.records[0].1.trajectory).unwrap(),
        std::fs::read(&record.trajectory).unwrap()
    );
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let mut cfg = config("[13]", 100);
    cfg.sweep = Some(SweepConfig {
        gas: Some(vec![3.0, 13.0]),
        hw_slope: Some(vec![0.005, 0.1]),
        ..Default::default()
    });
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = run_sweep(&cfg, a.path(), Some(1)).unwrap();
    let ob = run_sweep(&cfg, b.path(), Some(3)).unwrap();
    assert_eq!(
        std::fs::read(&oa.summary).unwrap(),
        std::fs::read(&ob.summary).unwrap()
    );
}
