// Generous budgets: the highway is long but barely congested, so every
// driver moves onto it.
//
// ```bash
// cargo run --release -p igd-core --example highway
// ```

use igd_core::congestion::{four_route_instance, HIGHWAY_SLOPE};
use igd_core::game::MixedProfile;
use igd_core::solver::{run, RunOutcome, SolverParams};

pub fn run_example() -> igd_core::Result<RunOutcome> {
    let (game, cs) = four_route_instance(&[13.0; 5], HIGHWAY_SLOPE)?.compile()?;
    let params = SolverParams::new(1e-3, 5_000).with_record_every(500);
    let out = run(&game, &cs, MixedProfile::uniform(game.space()), &params)?;

    for row in out.trajectory.rows() {
        println!("t = {:>5}  phi = {:>8.4}  gap = {:.3e}", row.t, row.phi, row.nash_gap);
    }
    let hw: Vec<f64> = out.final_state.x.strategies().iter().map(|x| x[3]).collect();
    println!("highway mass per player: {hw:.4?}");
    println!("largest one-step increase of phi: {:.2e}", out.max_phi_increase);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> igd_core::Result<()> {
    run_example().map(|_| ())
}
