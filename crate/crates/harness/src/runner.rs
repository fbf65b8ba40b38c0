//! Single runs and sweeps, with their on-disk artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use igd_core::game::MixedProfile;
use igd_core::metrics::{nash_gap, NashGapReport};
use igd_core::solver::{fmt_float, run, RunOutcome, Trajectory};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{read, write, EtaConfig, ExperimentConfig, ResolvedConfig};
use crate::error::{HarnessError, Result};
use crate::svg::{self, LineChart, Series};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const PROFILE_FILE: &str = "profile.toml";
pub const SPIDER_FILE: &str = "spider.svg";
pub const METRICS_FILE: &str = "metrics.svg";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const FAILURES_FILE: &str = "failures.csv";
pub const OVERLAY_FILE: &str = "gap_overlay.svg";

/// Paths and headline numbers of one finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub fingerprint: String,
    pub dir: PathBuf,
    pub trajectory: PathBuf,
    pub profile: PathBuf,
    pub spider: PathBuf,
    pub metrics: PathBuf,
    pub eta: f64,
    pub initial_gap: f64,
    pub final_gap: f64,
    pub final_violation: f64,
    pub final_lambda_sum: f64,
    pub ascent_steps: usize,
}

/// Final iterate of a run as written to `profile.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub iteration: usize,
    pub actions: Vec<String>,
    pub strategies: Vec<Vec<f64>>,
    pub lambda: Vec<Vec<f64>>,
    pub metrics: ProfileMetrics,
    /// Iterate before the smallest step, absent for runs without iterations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best: Option<BestProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileMetrics {
    pub phi: f64,
    pub nash_gap: f64,
    pub violation: f64,
    pub lambda_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BestProfile {
    pub t: usize,
    pub displacement: f64,
    pub strategies: Vec<Vec<f64>>,
}

impl ProfileFile {
    pub fn load(path: &Path) -> Result<Self> {
        toml::from_str(&read(path)?).map_err(|e| HarnessError::parse(path, &e))
    }

    /// The final strategies, or the stationarity witness when `best` is set.
    pub fn profile(&self, best: bool) -> Result<MixedProfile> {
        let strategies = match (&self.best, best) {
            (Some(b), true) => b.strategies.clone(),
            (None, true) => {
                return Err(HarnessError::Invalid("profile has no best iterate".into()));
            }
            _ => self.strategies.clone(),
        };
        Ok(MixedProfile::new(strategies)?)
    }
}

/// Compiles and runs `config` without touching the disk.
pub fn solve(resolved: &ResolvedConfig) -> Result<RunOutcome> {
    let cfg = &resolved.config;
    let x0 = cfg.initialization().profile(resolved.game.space())?;
    Ok(run(&resolved.game, &resolved.constraints, x0, &cfg.solver_params())?)
}

/// Runs `config` and writes the four run artifacts into `dir`.
pub fn run_single(config: &ExperimentConfig, dir: &Path) -> Result<RunRecord> {
    Ok(execute(config, dir)?.0)
}

/// [`run_single`], also returning the in-memory outcome.
pub fn execute(config: &ExperimentConfig, dir: &Path) -> Result<(RunRecord, RunOutcome)> {
    let resolved = config.resolve()?;
    let outcome = solve(&resolved)?;
    let record = write_run(&resolved, &outcome, dir)?;
    Ok((record, outcome))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes trajectory CSV, final profile, spider chart and metric curves.
pub fn write_run(resolved: &ResolvedConfig, outcome: &RunOutcome, dir: &Path) -> Result<RunRecord> {
    create_dir(dir)?;
    let trajectory = dir.join(TRAJECTORY_FILE);
    let profile = dir.join(PROFILE_FILE);
    let spider = dir.join(SPIDER_FILE);
    let metrics = dir.join(METRICS_FILE);

    write(&trajectory, outcome.trajectory.to_csv_string().as_bytes())?;

    let last = outcome
        .trajectory
        .last()
        .expect("a run always records its starting point");
    let file = ProfileFile {
        iteration: last.t,
        actions: resolved.action_names.clone(),
        strategies: last.x.clone(),
        lambda: last.lambda.clone(),
        metrics: ProfileMetrics {
            phi: last.phi,
            nash_gap: last.nash_gap,
            violation: last.violation,
            lambda_sum: last.lambda_sum,
        },
        best: outcome.best.as_ref().map(|b| BestProfile {
            t: b.t,
            displacement: b.displacement,
            strategies: b.x.strategies().to_vec(),
        }),
    };
    let text = toml::to_string(&file).map_err(|e| HarnessError::Serialize(e.to_string()))?;
    write(&profile, text.as_bytes())?;

    write(&spider, spider_svg(&resolved.action_names, &last.x, last.t).as_bytes())?;
    write(&metrics, metrics_svg(&outcome.trajectory).as_bytes())?;

    let first = outcome.trajectory.first().expect("nonempty trajectory");
    Ok(RunRecord {
        fingerprint: resolved.config.fingerprint()?,
        dir: dir.to_path_buf(),
        trajectory,
        profile,
        spider,
        metrics,
        eta: outcome.eta,
        initial_gap: first.nash_gap,
        final_gap: last.nash_gap,
        final_violation: last.violation,
        final_lambda_sum: last.lambda_sum,
        ascent_steps: outcome.ascent_steps,
    })
}

/// Spider chart of a profile: one axis per action, one polygon per player.
pub fn spider_svg(actions: &[String], strategies: &[Vec<f64>], t: usize) -> String {
    let profiles: Vec<(String, Vec<f64>)> = strategies
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut padded = x.clone();
            padded.resize(actions.len(), 0.0);
            (format!("player {i}"), padded)
        })
        .collect();
    svg::spider_chart(&format!("Strategies at t = {t}"), actions, &profiles)
}

/// Nash gap, violation and multiplier-sum curves, stacked.
pub fn metrics_svg(trajectory: &Trajectory) -> String {
    let column = |f: fn(&igd_core::solver::TrajectoryRow) -> f64| -> Vec<(f64, f64)> {
        trajectory.rows().iter().map(|r| (r.t as f64, f(r))).collect()
    };
    svg::stack(&[
        LineChart::new("Nash gap", "iteration", "gap")
            .log_y(true)
            .with_series(Series::new("gap", column(|r| r.nash_gap))),
        LineChart::new("Constraint violation", "iteration", "violation")
            .log_y(true)
            .with_series(Series::new("violation", column(|r| r.violation))),
        LineChart::new("Sum of multipliers", "iteration", "sum lambda")
            .with_series(Series::new("sum lambda", column(|r| r.lambda_sum))),
    ])
}

/// Nash gap of a saved profile under the config's instance.
pub fn profile_gap(config: &ExperimentConfig, profile: &Path, best: bool) -> Result<NashGapReport> {
    let resolved = config.resolve()?;
    let x = ProfileFile::load(profile)?.profile(best)?;
    Ok(nash_gap(&resolved.game, &resolved.constraints, &x)?)
}

/// One grid point of a sweep. `None` means the grid was not swept.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub gas: Option<f64>,
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub hw_slope: Option<f64>,
}

impl SweepPoint {
    pub fn dir_name(&self) -> String {
        format!("run-{:03}", self.index)
    }
}

/// Cartesian product of the sweep grids, in gas, eta, mu, hw_slope order
/// (last varies fastest), each paired with its single-run config.
pub fn sweep_points(config: &ExperimentConfig) -> Result<Vec<(SweepPoint, ExperimentConfig)>> {
    let sweep = config.sweep.clone().unwrap_or_default();
    let axis = |grid: &Option<Vec<f64>>, name: &str| -> Result<Vec<Option<f64>>> {
        match grid {
            None => Ok(vec![None]),
            Some(v) if v.is_empty() => Err(HarnessError::Invalid(format!("sweep grid `{name}` is empty"))),
            Some(v) => Ok(v.iter().copied().map(Some).collect()),
        }
    };
    let gas = axis(&sweep.gas, "gas")?;
    let eta = axis(&sweep.eta, "eta")?;
    let mu = axis(&sweep.mu, "mu")?;
    let hw = axis(&sweep.hw_slope, "hw_slope")?;
    if (sweep.gas.is_some() || sweep.hw_slope.is_some()) && config.instance.is_none() {
        return Err(HarnessError::Invalid(
            "gas and hw_slope grids need an inline [instance]".into(),
        ));
    }

    let mut out = Vec::with_capacity(gas.len() * eta.len() * mu.len() * hw.len());
    for &g in &gas {
        for &e in &eta {
            for &m in &mu {
                for &h in &hw {
                    let mut cfg = config.clone();
                    cfg.sweep = None;
                    if let Some(spec) = cfg.instance.as_mut() {
                        if let Some(g) = g {
                            spec.budgets = vec![g];
                        }
                        if let Some(h) = h {
                            spec.hw_slope = Some(h);
                        }
                    }
                    if let Some(e) = e {
                        cfg.solver.eta = EtaConfig::Fixed(e);
                    }
                    if let Some(m) = m {
                        cfg.solver.mu = m;
                    }
                    let point = SweepPoint {
                        index: out.len(),
                        gas: g,
                        eta: e,
                        mu: m,
                        hw_slope: h,
                    };
                    out.push((point, cfg));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<(SweepPoint, RunRecord)>,
    pub failures: Vec<(SweepPoint, String)>,
    pub summary: PathBuf,
    pub failures_file: PathBuf,
    pub overlay: PathBuf,
}

pub const SUMMARY_HEADER: &str = "index,run,gas,eta,mu,hw_slope,fingerprint,eta_used,initial_gap,final_gap,final_violation,final_lambda_sum,ascent_steps";

/// A finished point's record and its `(t, nash_gap)` series.
type PointResult = (RunRecord, Vec<(f64, f64)>);

/// Runs every grid point (in parallel across `workers` threads, or rayon's
/// default), one subdirectory each, then writes the summary table, the
/// failure list and a Nash-gap overlay. Failed points are recorded and
/// the sweep carries on.
pub fn run_sweep(config: &ExperimentConfig, dir: &Path, workers: Option<usize>) -> Result<SweepOutcome> {
    let points = sweep_points(config)?;
    create_dir(dir)?;
    let workers = workers.or(config.sweep.as_ref().and_then(|s| s.workers));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Invalid(format!("thread pool: {e}")))?;

    let results: Vec<(SweepPoint, Result<PointResult>)> = pool.install(|| {
        points
            .par_iter()
            .map(|(point, cfg)| {
                let result = execute(cfg, &dir.join(point.dir_name())).map(|(record, outcome)| {
                    let gaps = outcome
                        .trajectory
                        .rows()
                        .iter()
                        .map(|r| (r.t as f64, r.nash_gap))
                        .collect();
                    (record, gaps)
                });
                (point.clone(), result)
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut overlay = LineChart::new("Nash gap across sweep", "iteration", "gap").log_y(true);
    for (point, result) in results {
        match result {
            Ok((record, gaps)) => {
                overlay.series.push(Series::new(point.dir_name(), gaps));
                records.push((point, record));
            }
            Err(e) => failures.push((point, e.to_string())),
        }
    }

    let summary = dir.join(SUMMARY_FILE);
    write(&summary, summary_csv(&records).as_bytes())?;
    let failures_file = dir.join(FAILURES_FILE);
    let mut text = String::from("index,run,error\n");
    for (point, err) in &failures {
        let _ = writeln!(text, "{},{},\"{}\"", point.index, point.dir_name(), err.replace('"', "'"));
    }
    write(&failures_file, text.as_bytes())?;
    let overlay_path = dir.join(OVERLAY_FILE);
    write(&overlay_path, overlay.render().as_bytes())?;

    Ok(SweepOutcome {
        records,
        failures,
        summary,
        failures_file,
        overlay: overlay_path,
    })
}

fn summary_csv(records: &[(SweepPoint, RunRecord)]) -> String {
    let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    let mut out = format!("{SUMMARY_HEADER}\n");
    for (p, r) in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.index,
            p.dir_name(),
            opt(p.gas),
            opt(p.eta),
            opt(p.mu),
            opt(p.hw_slope),
            r.fingerprint,
            fmt_float(r.eta),
            fmt_float(r.initial_gap),
            fmt_float(r.final_gap),
            fmt_float(r.final_violation),
            fmt_float(r.final_lambda_sum),
            r.ascent_steps
        );
    }
    out
}
