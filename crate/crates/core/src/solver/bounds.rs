//! Instance constants used for step sizes and iteration-count diagnostics.

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::game::Game;

/// Constants of an instance that enter the smoothness and iteration bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceConstants {
    pub players: usize,
    /// `A_max`.
    pub max_actions: usize,
    /// `d`, total number of constraints.
    pub constraints: usize,
    /// `Phi_max`.
    pub potential_max: f64,
    /// `Phi_min`.
    pub potential_min: f64,
    /// `G_max`; `-inf` without constraints.
    pub g_max: f64,
    /// `gamma`.
    pub gamma: f64,
    /// `Lambda_max = sqrt(d) max(0, G_max) / (2 mu)`.
    pub lambda_max: f64,
}

impl InstanceConstants {
    pub fn new(game: &Game, cs: &ConstraintSet, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        let g_max = cs.g_max()?;
        Ok(Self {
            players: game.players(),
            max_actions: game.space().max_actions(),
            constraints: cs.total(),
            potential_max: game.potential_max(),
            potential_min: game.potential_min(),
            g_max,
            gamma: cs.smoothness(),
            lambda_max: lambda_max(cs.total(), g_max, mu),
        })
    }
}

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "regularizer must be positive and finite",
        });
    }
    Ok(())
}

/// Multiplier-norm bound `sqrt(d) max(0, G_max) / (2 mu)`.
pub fn lambda_max(d: usize, g_max: f64, mu: f64) -> f64 {
    (d as f64).sqrt() * g_max.max(0.0) / (2.0 * mu)
}

/// Upper bound `beta` on the gradient-Lipschitz constant of
/// `phi(x) = Phi(x) + sum_{i,m} max(0, g_{i,m}(x_i))^2 / (4 mu)` on the
/// product of simplices.
///
/// Three terms add up:
/// * `n A_max max|Phi|` bounds the Hessian of the multilinear potential
///   (Frobenius norm of its off-diagonal blocks);
/// * `max_i sum_m ||∇g_{i,m}||^2 / (2 mu)` bounds the curvature of the
///   squared hinge penalties; player blocks are decoupled, hence the max.
///   Constraints that are nonpositive on the whole simplex never activate
///   and are skipped;
/// * `Lambda_max gamma` covers curved constraints.
pub fn smoothness_bound(game: &Game, cs: &ConstraintSet, mu: f64) -> Result<f64> {
    let k = InstanceConstants::new(game, cs, mu)?;
    let potential_term = (k.players * k.max_actions) as f64 * game.potential_abs_max();
    let mut penalty_term = 0.0f64;
    for i in 0..cs.players() {
        let mut sum = 0.0;
        for c in cs.constraints(i) {
            let can_activate = c.as_affine().is_none_or(|a| a.max_over_simplex() > 0.0);
            if can_activate {
                sum += c.gradient_norm_bound().powi(2);
            }
        }
        penalty_term = penalty_term.max(sum / (2.0 * mu));
    }
    Ok(potential_term + penalty_term + k.lambda_max * k.gamma)
}

/// Default step size `1 / beta` with `beta` from [`smoothness_bound`];
/// guarantees a non-increasing `phi` along the iterates.
pub fn recipe_step_size(game: &Game, cs: &ConstraintSet, mu: f64) -> Result<f64> {
    let beta = smoothness_bound(game, cs, mu)?;
    if beta > 0.0 {
        Ok(1.0 / beta)
    } else {
        // Constant potential and inactive constraints: any step is a descent step.
        Ok(1.0)
    }
}

/// Closed-form step `mu / (4 ((n A_max Phi_max)^2 + (Lambda_max gamma)^2))`
/// from the stationarity lemma with the potential's smoothness constant.
/// Much smaller than [`recipe_step_size`]; kept as a diagnostic.
pub fn lemma_step_size(game: &Game, cs: &ConstraintSet, mu: f64) -> Result<f64> {
    let k = InstanceConstants::new(game, cs, mu)?;
    let a = (k.players * k.max_actions) as f64 * k.potential_max;
    let b = k.lambda_max * k.gamma;
    Ok(mu / (4.0 * (a * a + b * b)))
}

/// Iteration count after which some iterate is an `eps`-approximate
/// first-order stationary point of `phi`:
/// `T = 32 / (eps^2 mu) (Phi_max + Lambda_max sqrt(d) G_max) ((n A_max)^2 + (Lambda_max gamma)^2)`,
/// with `G_max` clamped at zero. Saturates at `u64::MAX`.
pub fn recommended_iterations(game: &Game, cs: &ConstraintSet, mu: f64, eps: f64) -> Result<u64> {
    Ok(recommended_iterations_f64(game, cs, mu, eps)?.ceil() as u64)
}

/// Real-valued form of [`recommended_iterations`].
pub fn recommended_iterations_f64(game: &Game, cs: &ConstraintSet, mu: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "target accuracy must be positive and finite",
        });
    }
    let k = InstanceConstants::new(game, cs, mu)?;
    let na = (k.players * k.max_actions) as f64;
    let gap = k.potential_max + k.lambda_max * (k.constraints as f64).sqrt() * k.g_max.max(0.0);
    let curvature = na * na + (k.lambda_max * k.gamma).powi(2);
    Ok(32.0 / (eps * eps * mu) * gap * curvature)
}
