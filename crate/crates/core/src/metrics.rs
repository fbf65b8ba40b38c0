//! Solution-quality measures: constrained best responses, Nash gap and
//! multiplier diagnostics.

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile};
use crate::lp::{minimize_over_simplex, LpRow};
use crate::solver::Multipliers;

/// Gaps below this are treated as rounding noise before clamping at zero.
pub const GAP_TOL: f64 = 1e-9;

/// A player's best feasible reply to the others.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse {
    /// Expected cost of the reply.
    pub value: f64,
    pub strategy: Vec<f64>,
}

/// Per-player and total Nash gap.
#[derive(Debug, Clone, PartialEq)]
pub struct NashGapReport {
    /// `max(0, C_i(x) - min_{x'_i in S_i} C_i(x'_i, x_{-i}))`.
    pub per_player: Vec<f64>,
    /// The same differences before clamping. Values below `-GAP_TOL` only
    /// occur when the player's own strategy is infeasible and undercuts
    /// every feasible reply.
    pub raw: Vec<f64>,
    pub total: f64,
    pub best_responses: Vec<BestResponse>,
}

impl NashGapReport {
    /// Players whose raw gap fell below `-GAP_TOL`.
    pub fn undercutting_players(&self) -> Vec<usize> {
        self.raw
            .iter()
            .enumerate()
            .filter(|(_, &g)| g < -GAP_TOL)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Cost-minimizing reply of `player` over their own feasible set with the
/// other players fixed: an LP in `x_i` with cost vector `p_a = C_i(a, x_{-i})`.
pub fn best_response_lp(
    game: &Game,
    cs: &ConstraintSet,
    player: usize,
    x: &MixedProfile,
) -> Result<BestResponse> {
    let p = game.cost_gradient(player, x)?;
    let affine = cs.affine(player)?;
    let rows: Vec<LpRow<'_>> = affine
        .iter()
        .map(|c| LpRow {
            coefficients: c.coefficients(),
            bound: c.offset(),
        })
        .collect();
    let sol = minimize_over_simplex(&p, &rows).ok_or(Error::Infeasible { player })?;
    Ok(BestResponse {
        value: sol.value,
        strategy: sol.x,
    })
}

/// Sum over players of current expected cost minus the best feasible reply.
pub fn nash_gap(game: &Game, cs: &ConstraintSet, x: &MixedProfile) -> Result<NashGapReport> {
    let mut raw = Vec::with_capacity(game.players());
    let mut best_responses = Vec::with_capacity(game.players());
    for i in 0..game.players() {
        let br = best_response_lp(game, cs, i, x)?;
        raw.push(game.expected_cost(i, x)? - br.value);
        best_responses.push(br);
    }
    let per_player: Vec<f64> = raw.iter().map(|&g| g.max(0.0)).collect();
    Ok(NashGapReport {
        total: per_player.iter().sum(),
        per_player,
        raw,
        best_responses,
    })
}

/// Nash gap with deviations ranging over the relaxed sets `{g_i <= eps}`.
pub fn relaxed_nash_gap(
    game: &Game,
    cs: &ConstraintSet,
    x: &MixedProfile,
    eps: f64,
) -> Result<NashGapReport> {
    nash_gap(game, &cs.relaxed(eps)?, x)
}

/// `sum_{i,m} lambda_{i,m}`.
pub fn multiplier_summary(lambda: &Multipliers) -> f64 {
    lambda.sum()
}

/// Per-constraint bounds `2 (Phi_max - Phi_min) / |xi_{i,m}|` on the optimal
/// multipliers of `player`. Requires a strictly negative Slater margin.
pub fn optimal_multiplier_bounds(game: &Game, cs: &ConstraintSet, player: usize) -> Result<Vec<f64>> {
    let report = cs.slater_report(player)?;
    if report.margin >= 0.0 {
        return Err(Error::SlaterViolated {
            player,
            margin: report.margin,
        });
    }
    let range = game.potential_max() - game.potential_min();
    Ok(report
        .per_constraint
        .iter()
        .map(|xi| 2.0 * range / xi.abs())
        .collect())
}

/// Largest of [`optimal_multiplier_bounds`]; zero without constraints.
pub fn optimal_multiplier_bound(game: &Game, cs: &ConstraintSet, player: usize) -> Result<f64> {
    Ok(optimal_multiplier_bounds(game, cs, player)?
        .into_iter()
        .fold(0.0, f64::max))
}
