// Compile the four-route network into a game plus gas constraints and
// print the instance constants the solver depends on.
//
// ```bash
// cargo run -p igd-core --example congestion_instance
// ```

use igd_core::congestion::{default_instance, ROUTE_NAMES};
use igd_core::solver::{lemma_step_size, recipe_step_size, recommended_iterations_f64, InstanceConstants};

pub fn run_example() -> igd_core::Result<InstanceConstants> {
    let instance = default_instance();
    let network = instance.network();
    for (path, name) in network.paths().iter().zip(ROUTE_NAMES) {
        println!("{name}: {} edges, gas {}", path.edges.len(), path.gas);
    }

    println!("Phi(all R1) = {}", network.rosenthal_potential(&[0; 5])?);
    println!("Phi(all HW) = {}", network.rosenthal_potential(&[3; 5])?);

    let (game, cs) = instance.compile()?;
    println!(
        "{} joint profiles, potential check {:?}",
        game.space().profile_count(),
        game.validate_potential()
    );
    for (i, b) in instance.budgets().iter().enumerate() {
        println!("player {i}: budget {b}, Slater margin {}", cs.slater_margin(i)?);
    }

    let mu = 1e-4;
    let k = InstanceConstants::new(&game, &cs, mu)?;
    println!("{k:#?}");
    println!("recipe step  {:.3e}", recipe_step_size(&game, &cs, mu)?);
    println!("lemma step   {:.3e}", lemma_step_size(&game, &cs, mu)?);
    println!("T(eps = 0.01) = {:.3e}", recommended_iterations_f64(&game, &cs, mu, 0.01)?);
    Ok(k)
}

#[allow(dead_code)]
fn main() -> igd_core::Result<()> {
    run_example().map(|_| ())
}
