// Build a small potential game by hand, evaluate mixed-strategy
// expectations and gradients, and check the potential identity.
//
// ```bash
// cargo run -p igd-core --example game_basics
// ```

use igd_core::game::{ActionSpace, Game, MixedProfile};

pub fn run_example() -> igd_core::Result<Game> {
    // Two players, two actions each. Coordination: matching is cheap.
    let space = ActionSpace::new(vec![2, 2])?;
    let potential = vec![0.0, 2.0, 2.0, 1.0];
    // Player 1 also pays a fee that depends only on player 0's action.
    let costs = vec![potential.clone(), vec![0.0, 2.0, 2.5, 1.5]];
    let game = Game::new(space.clone(), potential, costs)?;

    let check = game.validate_potential();
    println!("potential identity holds: {} (max violation {:.1e})", check.holds, check.max_violation);

    let x = MixedProfile::new(vec![vec![0.25, 0.75], vec![0.5, 0.5]])?;
    println!("E[Phi] = {:.4}", game.expected_potential(&x)?);
    for i in 0..game.players() {
        println!(
            "player {i}: E[C] = {:.4}  dPhi/dx = {:?}  dC/dx = {:?}",
            game.expected_cost(i, &x)?,
            game.potential_gradient(i, &x)?,
            game.cost_gradient(i, &x)?
        );
    }

    let pure = MixedProfile::pure(&space, &[1, 1])?;
    println!("Phi(1, 1) = {}", game.expected_potential(&pure)?);
    Ok(game)
}

#[allow(dead_code)]
fn main() -> igd_core::Result<()> {
    run_example().map(|_| ())
}
