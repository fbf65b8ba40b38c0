// Run one config end to end and list the files it writes.
//
// ```bash
// cargo run --release -p igd-harness --example single_run
// ```

use std::path::Path;

use igd_harness::{run_single, ExperimentConfig, RunRecord};

const CONFIG: &str = r#"
[instance]
players = 5
budgets = [13]

[solver]
mu = 1e-3
iterations = 5000
record_every = 50
"#;

pub fn run_example() -> igd_harness::Result<RunRecord> {
    let config = ExperimentConfig::from_toml(CONFIG, Path::new("inline.toml"))?;
    let dir = std::env::temp_dir().join("igd-example-single-run");
    let record = run_single(&config, &dir)?;

    println!("config fingerprint {}", record.fingerprint);
    for path in [&record.trajectory, &record.profile, &record.spider, &record.metrics] {
        println!("wrote {}", path.display());
    }
    println!(
        "gap {:.3e} -> {:.3e}, violation {:.1e}",
        record.initial_gap, record.final_gap, record.final_violation
    );
    Ok(record)
}

#[allow(dead_code)]
fn main() -> igd_harness::Result<()> {
    run_example().map(|_| ())
}
