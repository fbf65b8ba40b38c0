//! Static checks of a config before anything runs.

use std::fmt;

use igd_core::congestion::InstanceSpec;
use igd_core::constraints::ConstraintSet;
use igd_core::game::{ActionSpace, Game, MAX_PROFILES};
use igd_core::lp::{minimize_over_simplex, LpRow};
use igd_core::metrics::optimal_multiplier_bounds;
use igd_core::solver::{
    lambda_max, lemma_step_size, recipe_step_size, recommended_iterations_f64, InstanceConstants,
};

use crate::config::{EtaConfig, ExperimentConfig, GameFile, ResolvedConfig};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Range checks, per-player feasibility and Slater margins, and the
/// profile-space size guard, for the base config and every sweep value.
pub fn validate_config(config: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let s = &config.solver;
    check_positive(&mut out, "solver.mu", s.mu);
    if let EtaConfig::Fixed(eta) = s.eta {
        check_positive(&mut out, "solver.eta", eta);
    }
    if s.record_every == 0 {
        out.push(Diagnostic::error("solver.record_every must be at least 1"));
    }
    if !(s.alpha > 0.0) {
        out.push(Diagnostic::error(format!("solver.alpha = {} must be positive", s.alpha)));
    }

    match (&config.instance, &config.game) {
        (Some(spec), None) => check_instance(&mut out, spec, ""),
        (None, Some(path)) => match GameFile::load(path).and_then(|f| f.build()) {
            Ok((game, cs)) => check_players(&mut out, &game, &cs, ""),
            Err(e) => out.push(Diagnostic::error(e.to_string())),
        },
        (Some(_), Some(_)) => out.push(Diagnostic::error("set either [instance] or `game`, not both")),
        (None, None) => out.push(Diagnostic::error("missing instance: add an [instance] table or a `game` file")),
    }

    if let Some(sweep) = &config.sweep {
        let grids = [
            ("gas", &sweep.gas),
            ("eta", &sweep.eta),
            ("mu", &sweep.mu),
            ("hw_slope", &sweep.hw_slope),
        ];
        for (name, grid) in grids {
            if matches!(grid, Some(v) if v.is_empty()) {
                out.push(Diagnostic::error(format!("sweep.{name} grid is empty")));
            }
        }
        for &v in sweep.eta.iter().flatten() {
            check_positive(&mut out, "sweep.eta", v);
        }
        for &v in sweep.mu.iter().flatten() {
            check_positive(&mut out, "sweep.mu", v);
        }
        for &v in sweep.hw_slope.iter().flatten() {
            if !(v >= 0.0) || !v.is_finite() {
                out.push(Diagnostic::error(format!("sweep.hw_slope = {v} must be nonnegative")));
            }
        }
        if sweep.workers == Some(0) {
            out.push(Diagnostic::error("sweep.workers must be at least 1"));
        }
        match &config.instance {
            Some(spec) => {
                for &g in sweep.gas.iter().flatten() {
                    let mut swept = spec.clone();
                    swept.budgets = vec![g];
                    check_instance(&mut out, &swept, &format!("sweep gas {g}: "));
                }
            }
            None if sweep.gas.is_some() || sweep.hw_slope.is_some() => {
                out.push(Diagnostic::error("gas and hw_slope grids need an inline [instance]"));
            }
            None => {}
        }
    }
    out
}

fn check_positive(out: &mut Vec<Diagnostic>, name: &str, v: f64) {
    if !(v > 0.0) || !v.is_finite() {
        out.push(Diagnostic::error(format!("{name} = {v} must be positive and finite")));
    }
}

fn check_instance(out: &mut Vec<Diagnostic>, spec: &InstanceSpec, prefix: &str) {
    let paths = spec.paths.as_ref().map_or(4, Vec::len);
    if spec.players > 0 && paths > 0 {
        let size = (paths as u128).checked_pow(spec.players as u32);
        if size.is_none_or(|s| s > MAX_PROFILES) {
            out.push(Diagnostic::error(format!(
                "{prefix}{paths}^{} joint profiles exceed the enumeration limit of {}",
                spec.players, MAX_PROFILES
            )));
            return;
        }
    }
    match spec.build().and_then(|inst| inst.compile()) {
        Ok((game, cs)) => check_players(out, &game, &cs, prefix),
        Err(e) => out.push(Diagnostic::error(format!("{prefix}{e}"))),
    }
}

fn check_players(out: &mut Vec<Diagnostic>, game: &Game, cs: &ConstraintSet, prefix: &str) {
    for i in 0..game.players() {
        let affine = match cs.affine(i) {
            Ok(a) => a,
            Err(e) => {
                out.push(Diagnostic::error(format!("{prefix}player {i}: {e}")));
                continue;
            }
        };
        if affine.is_empty() {
            continue;
        }
        let rows: Vec<LpRow<'_>> = affine
            .iter()
            .map(|c| LpRow {
                coefficients: c.coefficients(),
                bound: c.offset(),
            })
            .collect();
        let zero = vec![0.0; game.space().actions(i)];
        if minimize_over_simplex(&zero, &rows).is_none() {
            out.push(Diagnostic::error(format!(
                "{prefix}player {i}: no strategy satisfies the constraints (empty feasible set)"
            )));
            continue;
        }
        match cs.slater_margin(i) {
            Ok(m) if m >= 0.0 => out.push(Diagnostic::warning(format!(
                "{prefix}player {i}: Slater margin {m} >= 0, no strictly feasible pure strategy"
            ))),
            Ok(_) => {}
            Err(e) => out.push(Diagnostic::error(format!("{prefix}player {i}: {e}"))),
        }
    }
}

/// Instance constants, step sizes, the iteration bound and multiplier
/// bounds, as text.
pub fn info(resolved: &ResolvedConfig, eps: f64) -> Result<String> {
    use std::fmt::Write;
    let (game, cs) = (&resolved.game, &resolved.constraints);
    let mu = resolved.config.solver.mu;
    let k = InstanceConstants::new(game, cs, mu)?;
    let space: &ActionSpace = game.space();
    let mut s = String::new();
    let _ = writeln!(s, "players            {}", k.players);
    let _ = writeln!(s, "actions            {:?}", space.action_counts());
    let _ = writeln!(s, "joint profiles     {}", space.profile_count());
    let _ = writeln!(s, "constraints (d)    {}", k.constraints);
    let _ = writeln!(s, "Phi_max, Phi_min   {}, {}", k.potential_max, k.potential_min);
    let _ = writeln!(s, "G_max              {}", k.g_max);
    let _ = writeln!(s, "gamma              {}", k.gamma);
    let _ = writeln!(s, "mu                 {mu}");
    let _ = writeln!(s, "Lambda_max         {:.6e}", lambda_max(k.constraints, k.g_max, mu));
    let _ = writeln!(s, "recipe eta         {:.6e}", recipe_step_size(game, cs, mu)?);
    let _ = writeln!(s, "lemma eta          {:.6e}", lemma_step_size(game, cs, mu)?);
    let _ = writeln!(
        s,
        "recommended T      {:.6e}  (eps = {eps})",
        recommended_iterations_f64(game, cs, mu, eps)?
    );
    for i in 0..game.players() {
        let margin = cs.slater_margin(i)?;
        let bound = match optimal_multiplier_bounds(game, cs, i) {
            Ok(b) => format!("{b:.4?}"),
            Err(_) => "unavailable".into(),
        };
        let _ = writeln!(s, "player {i}: Slater margin {margin}, optimal multiplier bounds {bound}");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn config(budgets: &str, mu: &str) -> ExperimentConfig {
        let text = format!(
            "[instance]\nplayers = 5\nbudgets = {budgets}\n[solver]\nmu = {mu}\niterations = 10\n"
        );
        ExperimentConfig::from_toml(&text, Path::new("t.toml")).unwrap()
    }

    #[test]
    fn zero_mu_is_an_error() {
        let d = validate_config(&config("[13]", "0.0"));
        assert!(has_errors(&d));
        assert!(d.iter().any(|d| d.message.contains("solver.mu")));
    }

    #[test]
    fn budget_below_cheapest_path_is_infeasible() {
        let d = validate_config(&config("[1]", "1e-3"));
        assert!(has_errors(&d));
        assert!(d.iter().any(|d| d.message.contains("empty feasible set")));
    }

    #[test]
    fn budget_equal_to_cheapest_path_warns() {
        let d = validate_config(&config("[2]", "1e-3"));
        assert!(!has_errors(&d));
        assert_eq!(d.len(), 5);
        assert!(d.iter().all(|d| d.severity == Severity::Warning && d.message.contains("Slater")));
    }

    #[test]
    fn slack_budgets_are_clean() {
        assert!(validate_config(&config("[10]", "1e-3")).is_empty());
        assert!(validate_config(&config("[13]", "1e-3")).is_empty());
    }

    #[test]
    fn size_guard() {
        let mut cfg = config("[13]", "1e-3");
        cfg.instance.as_mut().unwrap().players = 12;
        let d = validate_config(&cfg);
        assert!(d.iter().any(|d| d.message.contains("enumeration limit")));
    }
}
