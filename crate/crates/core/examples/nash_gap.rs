// Measure how far a profile is from a constrained equilibrium by solving
// each player's best-response LP.
//
// ```bash
// cargo run -p igd-core --example nash_gap
// ```

use igd_core::congestion::default_instance;
use igd_core::game::MixedProfile;
use igd_core::metrics::{nash_gap, relaxed_nash_gap, NashGapReport};

pub fn run_example() -> igd_core::Result<NashGapReport> {
    let (game, cs) = default_instance().compile()?;
    let x = MixedProfile::uniform(game.space());

    let report = nash_gap(&game, &cs, &x)?;
    for (i, br) in report.best_responses.iter().enumerate() {
        println!(
            "player {i}: gap {:.4} (raw {:+.4}), best reply {:.3?}",
            report.per_player[i], report.raw[i], br.strategy
        );
    }
    println!("total gap {:.4}", report.total);

    // Everyone on the highway is cheap but breaks the small budgets: those
    // players pay less than any reply they can afford, and their gap clamps to 0.
    let all_hw = MixedProfile::pure(game.space(), &[3; 5])?;
    let hw = nash_gap(&game, &cs, &all_hw)?;
    println!("all on HW: raw gaps {:+.3?}, undercutting {:?}", hw.raw, hw.undercutting_players());

    let relaxed = relaxed_nash_gap(&game, &cs, &x, 0.5)?;
    println!("gap against budgets relaxed by 0.5: {:.4}", relaxed.total);
    Ok(report)
}

#[allow(dead_code)]
fn main() -> igd_core::Result<()> {
    run_example().map(|_| ())
}
