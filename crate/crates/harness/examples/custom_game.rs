// Save an arbitrary game with its constraints to a file and solve it
// through a config that points at that file.
//
// ```bash
// cargo run -p igd-harness --example custom_game
// ```

use igd_core::constraints::{AffineConstraint, ConstraintSet};
use igd_core::game::{ActionSpace, Game};
use igd_harness::runner::{profile_gap, run_single};
use igd_harness::{ExperimentConfig, GameFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> igd_harness::Result<f64> {
    let dir = std::env::temp_dir().join("igd-example-custom-game");
    std::fs::create_dir_all(&dir).expect("temp dir is writable");

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let space = ActionSpace::new(vec![3, 3, 2])?;
    let game = Game::random_potential(space, 1.0, &mut rng)?;
    // Players 0 and 1 may put at most 40% on their first action.
    let cap = AffineConstraint::new(vec![1.0, 0.0, 0.0], 0.4)?;
    let cs = ConstraintSet::from_affine(&[3, 3, 2], vec![vec![cap.clone()], vec![cap], vec![]])?;
    GameFile::from_parts(&game, &cs)?.save(&dir.join("game.toml"))?;

    let config_path = dir.join("experiment.toml");
    std::fs::write(
        &config_path,
        "game = \"game.toml\"\n\n[solver]\nmu = 0.01\niterations = 3000\nrecord_every = 100\n",
    )
    .expect("temp dir is writable");

    let config = ExperimentConfig::load(&config_path)?;
    let record = run_single(&config, &dir.join("run"))?;
    println!("gap {:.3e} -> {:.3e}", record.initial_gap, record.final_gap);

    let report = profile_gap(&config, &record.profile, false)?;
    println!("recomputed from profile.toml: {:.3e}", report.total);
    Ok(report.total)
}

#[allow(dead_code)]
fn main() -> igd_harness::Result<()> {
    run_example().map(|_| ())
}
