// Check configs before running them.
//
// ```bash
// cargo run -p igd-harness --example validate_config
// ```

use std::path::Path;

use igd_harness::{validate_config, Diagnostic, ExperimentConfig};

pub fn run_example() -> igd_harness::Result<Vec<Diagnostic>> {
    let mut all = Vec::new();
    for (label, budgets, mu) in [
        ("slack budgets", "[13]", "1e-3"),
        ("budget equals cheapest route", "[2]", "1e-3"),
        ("budget below cheapest route", "[1]", "1e-3"),
        ("zero regularizer", "[13]", "0.0"),
    ] {
        let text = format!(
            "[instance]\nplayers = 5\nbudgets = {budgets}\n[solver]\nmu = {mu}\niterations = 100\n"
        );
        let config = ExperimentConfig::from_toml(&text, Path::new("inline.toml"))?;
        let diagnostics = validate_config(&config);
        println!("{label}: {} diagnostics", diagnostics.len());
        for d in diagnostics.iter().take(2) {
            println!("  {d}");
        }
        all.extend(diagnostics);
    }

    // Syntax errors point at the offending line.
    let err = ExperimentConfig::from_toml("[solver]\nmu = \n", Path::new("broken.toml")).unwrap_err();
    println!("{err}");
    Ok(all)
}

#[allow(dead_code)]
fn main() -> igd_harness::Result<()> {
    run_example().map(|_| ())
}
