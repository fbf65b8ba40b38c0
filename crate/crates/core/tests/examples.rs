macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(game_basics, "game_basics.rs");
example!(congestion_instance, "congestion_instance.rs");
example!(highway, "highway.rs");
example!(tight_budgets, "tight_budgets.rs");
example!(nash_gap, "nash_gap.rs");
example!(multiplier_bounds, "multiplier_bounds.rs");

#[test]
fn game_basics_runs() {
    let game = game_basics::run_example().unwrap();
    assert!(game.validate_potential().holds);
}

#[test]
fn congestion_instance_runs() {
    let k = congestion_instance::run_example().unwrap();
    assert_eq!((k.players, k.max_actions, k.constraints), (5, 4, 5));
    assert_eq!((k.potential_max, k.potential_min, k.g_max), (60.0, 1.5, 8.0));
}

#[test]
fn highway_runs() {
    let out = highway::run_example().unwrap();
    assert!(out.final_state.x.strategies().iter().all(|x| x[3] >= 0.99));
}

#[test]
fn tight_budgets_runs() {
    let out = tight_budgets::run_example().unwrap();
    assert!(out.final_state.x.strategies().iter().all(|x| x[0] >= 0.99));
    assert!(out.trajectory.last().unwrap().violation <= 1e-2);
}

#[test]
fn nash_gap_runs() {
    let report = nash_gap::run_example().unwrap();
    assert!((report.total - 9.4).abs() < 1e-9);
}

#[test]
fn multiplier_bounds_runs() {
    let lambda = multiplier_bounds::run_example().unwrap();
    assert_eq!(lambda.values()[0], vec![87.5]);
}
