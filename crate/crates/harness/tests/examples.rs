macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(single_run, "single_run.rs");
example!(sweep, "sweep.rs");
example!(validate_config, "validate_config.rs");
example!(custom_game, "custom_game.rs");
example!(svg_charts, "svg_charts.rs");

#[test]
fn single_run_runs() {
    let record = single_run::run_example().unwrap();
    assert!(record.trajectory.exists() && record.spider.exists());
    assert!(record.final_gap < 1e-2);
}

#[test]
fn sweep_runs() {
    let outcome = sweep::run_example().unwrap();
    assert_eq!(outcome.records.len(), 6);
    assert!(outcome.failures.is_empty());
}

#[test]
fn validate_config_runs() {
    let diagnostics = validate_config::run_example().unwrap();
    assert!(igd_harness::validate::has_errors(&diagnostics));
}

#[test]
fn custom_game_runs() {
    let gap = custom_game::run_example().unwrap();
    assert!(gap.is_finite() && gap >= 0.0);
}

#[test]
fn svg_charts_runs() {
    let (line, spider) = svg_charts::run_example().unwrap();
    roxmltree::Document::parse(&line).unwrap();
    roxmltree::Document::parse(&spider).unwrap();
}
