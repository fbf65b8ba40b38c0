// Draw a line chart and a spider chart with the built-in SVG writer.
//
// ```bash
// cargo run -p igd-harness --example svg_charts
// ```

use igd_harness::svg::{spider_chart, LineChart, Series};

pub fn run_example() -> std::io::Result<(String, String)> {
    let decay: Vec<(f64, f64)> = (0..50).map(|t| (t as f64, 0.8f64.powi(t))).collect();
    let slow: Vec<(f64, f64)> = (0..50).map(|t| (t as f64, 1.0 / (1.0 + t as f64))).collect();
    let line = LineChart::new("Two decays", "step", "value")
        .log_y(true)
        .with_series(Series::new("geometric", decay))
        .with_series(Series::new("harmonic", slow))
        .render();

    let axes: Vec<String> = ["R1", "R2", "R3", "HW"].iter().map(|s| s.to_string()).collect();
    let spider = spider_chart(
        "Two strategies",
        &axes,
        &[
            ("cautious".into(), vec![0.7, 0.2, 0.1, 0.0]),
            ("highway".into(), vec![0.0, 0.05, 0.05, 0.9]),
        ],
    );

    let dir = std::env::temp_dir().join("igd-example-svg");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("line.svg"), &line)?;
    std::fs::write(dir.join("spider.svg"), &spider)?;
    println!("wrote {}", dir.display());
    Ok((line, spider))
}

#[allow(dead_code)]
fn main() -> std::io::Result<()> {
    run_example().map(|_| ())
}
