// Sweep budgets and regularizers and compare final metrics.
//
// ```bash
// cargo run --release -p igd-harness --example sweep
// ```

use std::path::Path;

use igd_harness::{run_sweep, ExperimentConfig, SweepOutcome};

const CONFIG: &str = r#"
[instance]
players = 5
budgets = [13]

[solver]
mu = 1e-3
iterations = 4000
record_every = 100

[sweep]
gas = [3, 6, 13]
mu = [1e-4, 1e-3]
"#;

pub fn run_example() -> igd_harness::Result<SweepOutcome> {
    let config = ExperimentConfig::from_toml(CONFIG, Path::new("inline.toml"))?;
    let dir = std::env::temp_dir().join("igd-example-sweep");
    let outcome = run_sweep(&config, &dir, Some(2))?;

    for (point, record) in &outcome.records {
        println!(
            "gas {:>4}  mu {:<7}  gap {:.3e}  violation {:.2e}  sum lambda {:.3}",
            point.gas.unwrap_or_default(),
            point.mu.unwrap_or_default(),
            record.final_gap,
            record.final_violation,
            record.final_lambda_sum
        );
    }
    println!("summary: {}", outcome.summary.display());
    println!("overlay: {}", outcome.overlay.display());
    Ok(outcome)
}

#[allow(dead_code)]
fn main() -> igd_harness::Result<()> {
    run_example().map(|_| ())
}
