// Closed-form multipliers, the regularized objective they maximize, and
// the a-priori bounds that hold for them.
//
// ```bash
// cargo run -p igd-core --example multiplier_bounds
// ```

use igd_core::congestion::{four_route_instance, HIGHWAY_SLOPE};
use igd_core::game::MixedProfile;
use igd_core::metrics::optimal_multiplier_bound;
use igd_core::solver::{lagrangian, lambda_max, multiplier_step, phi, Multipliers};

pub fn run_example() -> igd_core::Result<Multipliers> {
    let (game, cs) = four_route_instance(&[3.0, 4.0, 6.0, 9.0, 13.0], HIGHWAY_SLOPE)?.compile()?;
    let mu = 1e-2;
    let x = MixedProfile::uniform(game.space());

    let lambda = multiplier_step(&cs, &x, mu)?;
    println!("lambda*(uniform) = {:?}", lambda.values());
    println!("phi = {:.4}, L~(x, lambda*) = {:.4}", phi(&game, &cs, &x, mu)?, lagrangian(&game, &cs, &x, &lambda, mu)?);
    println!(
        "||lambda|| = {:.3} <= Lambda_max = {:.3}",
        lambda.norm(),
        lambda_max(cs.total(), cs.g_max()?, mu)
    );

    for i in 0..game.players() {
        println!("player {i}: optimal multipliers <= {:.3}", optimal_multiplier_bound(&game, &cs, i)?);
    }
    Ok(lambda)
}

#[allow(dead_code)]
fn main() -> igd_core::Result<()> {
    run_example().map(|_| ())
}
