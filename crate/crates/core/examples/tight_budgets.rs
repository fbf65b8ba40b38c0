// Every driver gets only 2 units of gas, so R1 is the only affordable
// route even though it is the most congested one.
//
// ```bash
// cargo run --release -p igd-core --example tight_budgets
// ```

use igd_core::congestion::{four_route_instance, HIGHWAY_SLOPE, ROUTE_NAMES};
use igd_core::game::MixedProfile;
use igd_core::solver::{run, RunOutcome, SolverParams};

pub fn run_example() -> igd_core::Result<RunOutcome> {
    let (game, cs) = four_route_instance(&[2.0; 5], HIGHWAY_SLOPE)?.compile()?;
    let params = SolverParams::new(1e-4, 20_000).with_record_every(2_000);
    let out = run(&game, &cs, MixedProfile::uniform(game.space()), &params)?;

    println!("eta = {:.3e}", out.eta);
    for row in out.trajectory.rows() {
        println!(
            "t = {:>6}  phi = {:>10.5}  gap = {:.2e}  violation = {:.2e}  sum lambda = {:.1}",
            row.t, row.phi, row.nash_gap, row.violation, row.lambda_sum
        );
    }
    for (i, x) in out.final_state.x.strategies().iter().enumerate() {
        let mass: Vec<String> = ROUTE_NAMES
            .iter()
            .zip(x)
            .map(|(name, p)| format!("{name} {p:.4}"))
            .collect();
        println!("player {i}: {}", mass.join("  "));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> igd_core::Result<()> {
    run_example().map(|_| ())
}
