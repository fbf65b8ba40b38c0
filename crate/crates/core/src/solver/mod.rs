//! Independent projected gradient descent on the regularized Lagrangian
//! `L~(x, lambda) = Phi(x) + lambda^T g(x) - mu ||lambda||^2`.
//!
//! Each iteration first maximizes `L~` over `lambda >= 0`, which has the
//! closed form `lambda_{i,m} = max(0, g_{i,m}(x_i)) / (2 mu)`, then every
//! player takes a projected gradient step on their own cost plus the
//! multiplier-weighted constraint gradients, all from the same iterate.
//! This is projected gradient descent on `phi(x) = max_lambda L~(x, lambda)`:
//! a player's cost gradient and the potential gradient differ by a multiple
//! of the all-ones vector, which the simplex projection ignores.

pub mod bounds;
mod projection;
mod trajectory;

pub use bounds::{
    lambda_max, lemma_step_size, recipe_step_size, recommended_iterations,
    recommended_iterations_f64, smoothness_bound, InstanceConstants,
};
pub use projection::project_simplex;
pub use trajectory::{fmt_float, Trajectory, TrajectoryRow, CSV_HEADER};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constraints::ConstraintSet;
use crate::error::{Error, Result};
use crate::game::{ActionSpace, Game, MixedProfile};
use crate::metrics::nash_gap;
use bounds::check_mu;

/// Per-step increase of `phi` tolerated before a step counts as ascent.
pub const DESCENT_TOL: f64 = 1e-8;

/// Nonnegative multipliers, one vector of length `d_i` per player.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers(Vec<Vec<f64>>);

impl Multipliers {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("multipliers"));
        }
        if let Some(&v) = values.iter().flatten().find(|&&v| v < 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: v,
                reason: "multipliers must be nonnegative",
            });
        }
        Ok(Self(values))
    }

    pub fn zeros(counts: &[usize]) -> Self {
        Self(counts.iter().map(|&d| vec![0.0; d]).collect())
    }

    pub fn player(&self, i: usize) -> &[f64] {
        &self.0[i]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().flatten().sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// How the strategy step size is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    /// `1 / beta` from [`smoothness_bound`].
    Recipe,
    Fixed(f64),
}

/// Starting point of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initialization {
    Uniform,
    /// Independent Dirichlet draws per player from a seeded generator.
    Dirichlet { seed: u64, alpha: f64 },
}

impl Initialization {
    pub fn profile(&self, space: &ActionSpace) -> Result<MixedProfile> {
        match *self {
            Self::Uniform => Ok(MixedProfile::uniform(space)),
            Self::Dirichlet { seed, alpha } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                MixedProfile::random(space, alpha, &mut rng)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Regularizer `mu > 0`.
    pub mu: f64,
    pub step: StepSize,
    /// Number of iterations `T`.
    pub iterations: usize,
    /// Record metrics every this many iterations (the last iterate is always recorded).
    pub record_every: usize,
}

impl SolverParams {
    pub fn new(mu: f64, iterations: usize) -> Self {
        Self {
            mu,
            step: StepSize::Recipe,
            iterations,
            record_every: 1,
        }
    }

    pub fn with_step(mut self, step: StepSize) -> Self {
        self.step = step;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_mu(self.mu)?;
        if let StepSize::Fixed(eta) = self.step {
            check_eta(eta)?;
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter {
                name: "record_every",
                value: 0.0,
                reason: "recording stride must be at least 1",
            });
        }
        Ok(())
    }

    /// Resolves the step size for an instance.
    pub fn eta(&self, game: &Game, cs: &ConstraintSet) -> Result<f64> {
        self.validate()?;
        match self.step {
            StepSize::Recipe => recipe_step_size(game, cs, self.mu),
            StepSize::Fixed(eta) => Ok(eta),
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            reason: "step size must be positive and finite",
        });
    }
    Ok(())
}

/// Iterate and the multipliers maximizing `L~` at it.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub x: MixedProfile,
    pub lambda: Multipliers,
    pub iteration: usize,
}

impl SolverState {
    /// State at `x0` with `lambda = argmax L~(x0, .)`.
    pub fn initial(cs: &ConstraintSet, x0: MixedProfile, mu: f64) -> Result<Self> {
        let lambda = multiplier_step(cs, &x0, mu)?;
        Ok(Self {
            x: x0,
            lambda,
            iteration: 0,
        })
    }
}

/// `argmax_{lambda >= 0} lambda^T g(x) - mu ||lambda||^2`, componentwise
/// `max(0, g_{i,m}(x_i)) / (2 mu)`.
pub fn multiplier_step(cs: &ConstraintSet, x: &MixedProfile, mu: f64) -> Result<Multipliers> {
    check_mu(mu)?;
    let g = cs.evaluate_all(x)?;
    Ok(Multipliers(
        g.into_iter()
            .map(|gi| gi.into_iter().map(|v| v.max(0.0) / (2.0 * mu)).collect())
            .collect(),
    ))
}

/// `L~(x, lambda) = Phi(x) + sum_{i,m} lambda_{i,m} g_{i,m}(x_i) - mu ||lambda||^2`.
pub fn lagrangian(
    game: &Game,
    cs: &ConstraintSet,
    x: &MixedProfile,
    lambda: &Multipliers,
    mu: f64,
) -> Result<f64> {
    check_mu(mu)?;
    let g = cs.evaluate_all(x)?;
    if lambda.0.len() != g.len() {
        return Err(Error::DimensionMismatch {
            what: "multiplier lists",
            expected: g.len(),
            found: lambda.0.len(),
        });
    }
    let mut total = game.expected_potential(x)?;
    for (gi, li) in g.iter().zip(&lambda.0) {
        if gi.len() != li.len() {
            return Err(Error::DimensionMismatch {
                what: "multipliers",
                expected: gi.len(),
                found: li.len(),
            });
        }
        total += gi.iter().zip(li).map(|(g, l)| l * g - mu * l * l).sum::<f64>();
    }
    Ok(total)
}

/// `phi(x) = max_lambda L~(x, lambda) = Phi(x) + sum_{i,m} max(0, g_{i,m})^2 / (4 mu)`.
pub fn phi(game: &Game, cs: &ConstraintSet, x: &MixedProfile, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let penalty: f64 = cs
        .evaluate_all(x)?
        .iter()
        .flatten()
        .map(|g| g.max(0.0).powi(2))
        .sum();
    Ok(game.expected_potential(x)? + penalty / (4.0 * mu))
}

/// `∇phi(x) = ∇_x L~(x, lambda*(x))`, per player.
pub fn phi_gradient(
    game: &Game,
    cs: &ConstraintSet,
    x: &MixedProfile,
    mu: f64,
) -> Result<Vec<Vec<f64>>> {
    let lambda = multiplier_step(cs, x, mu)?;
    (0..game.players())
        .map(|i| {
            let mut grad = game.potential_gradient(i, x)?;
            add_constraint_terms(cs, i, x.strategy(i), lambda.player(i), &mut grad)?;
            Ok(grad)
        })
        .collect()
}

fn add_constraint_terms(
    cs: &ConstraintSet,
    player: usize,
    x_i: &[f64],
    lambda_i: &[f64],
    grad: &mut [f64],
) -> Result<()> {
    for (m, &l) in lambda_i.iter().enumerate() {
        if l != 0.0 {
            let dg = cs.gradient_at(player, m, x_i)?;
            for (g, d) in grad.iter_mut().zip(dg) {
                *g += l * d;
            }
        }
    }
    Ok(())
}

/// One synchronous iteration with the step size resolved from `params`.
pub fn igd_step(
    game: &Game,
    cs: &ConstraintSet,
    state: &SolverState,
    params: &SolverParams,
) -> Result<SolverState> {
    Igd::new(game, cs, params)?.step(state)
}

/// Runs `params.iterations` iterations from `x0`.
pub fn run(
    game: &Game,
    cs: &ConstraintSet,
    x0: MixedProfile,
    params: &SolverParams,
) -> Result<RunOutcome> {
    Igd::new(game, cs, params)?.run(x0, params.iterations, params.record_every)
}

/// Iterate preceding the smallest step `||x^(t+1) - x^(t)||` of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct BestIterate {
    pub t: usize,
    pub x: MixedProfile,
    pub displacement: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub final_state: SolverState,
    /// `None` when no iteration ran.
    pub best: Option<BestIterate>,
    pub eta: f64,
    /// Largest one-step increase of `phi` (negative when strictly descending).
    pub max_phi_increase: f64,
    /// Steps whose `phi` increase exceeded [`DESCENT_TOL`].
    pub ascent_steps: usize,
}

impl RunOutcome {
    /// Best iterate, falling back to the final iterate for empty runs.
    pub fn witness(&self) -> &MixedProfile {
        self.best.as_ref().map_or(&self.final_state.x, |b| &b.x)
    }
}

/// The solver bound to one instance and resolved hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct Igd<'a> {
    game: &'a Game,
    cs: &'a ConstraintSet,
    mu: f64,
    eta: f64,
}

impl<'a> Igd<'a> {
    pub fn new(game: &'a Game, cs: &'a ConstraintSet, params: &SolverParams) -> Result<Self> {
        let eta = params.eta(game, cs)?;
        Self::with_step(game, cs, params.mu, eta)
    }

    /// Explicit step size; `eta = 0` is allowed and leaves iterates fixed.
    pub fn with_step(game: &'a Game, cs: &'a ConstraintSet, mu: f64, eta: f64) -> Result<Self> {
        check_mu(mu)?;
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                value: eta,
                reason: "step size must be nonnegative and finite",
            });
        }
        if cs.action_counts() != game.space().action_counts() {
            return Err(Error::DimensionMismatch {
                what: "constraint set players",
                expected: game.players(),
                found: cs.players(),
            });
        }
        Ok(Self { game, cs, mu, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn phi(&self, x: &MixedProfile) -> Result<f64> {
        phi(self.game, self.cs, x, self.mu)
    }

    /// `x_i <- Pi(x_i - eta (∇_{x_i} C_i(x) + lambda_i^T ∇g_i(x_i)))` for all
    /// players, with `lambda` maximized at the current `x`.
    pub fn step(&self, state: &SolverState) -> Result<SolverState> {
        let x = &state.x;
        x.check_space(self.game.space())?;
        let lambda = multiplier_step(self.cs, x, self.mu)?;
        let mut next = Vec::with_capacity(self.game.players());
        for i in 0..self.game.players() {
            let mut grad = self.game.cost_gradient(i, x)?;
            add_constraint_terms(self.cs, i, x.strategy(i), lambda.player(i), &mut grad)?;
            let moved: Vec<f64> = x
                .strategy(i)
                .iter()
                .zip(&grad)
                .map(|(xi, g)| xi - self.eta * g)
                .collect();
            next.push(project_simplex(&moved)?);
        }
        let x_next = MixedProfile::new(next)?;
        let lambda_next = multiplier_step(self.cs, &x_next, self.mu)?;
        Ok(SolverState {
            x: x_next,
            lambda: lambda_next,
            iteration: state.iteration + 1,
        })
    }

    fn record(&self, state: &SolverState, displacement: f64) -> Result<TrajectoryRow> {
        let x = &state.x;
        let gap = nash_gap(self.game, self.cs, x)?;
        Ok(TrajectoryRow {
            t: state.iteration,
            phi: self.phi(x)?,
            lagrangian: lagrangian(self.game, self.cs, x, &state.lambda, self.mu)?,
            nash_gap: gap.total,
            violation: self.cs.violation(x),
            lambda_sum: state.lambda.sum(),
            displacement,
            x: x.strategies().to_vec(),
            lambda: state.lambda.values().to_vec(),
        })
    }

    /// Iterates `iterations` times, recording every `record_every` steps and
    /// at the final iterate.
    pub fn run(&self, x0: MixedProfile, iterations: usize, record_every: usize) -> Result<RunOutcome> {
        let record_every = record_every.max(1);
        let mut state = SolverState::initial(self.cs, x0, self.mu)?;
        let mut trajectory = Trajectory::new();
        trajectory.push(self.record(&state, 0.0)?);

        let mut best: Option<BestIterate> = None;
        let mut phi_current = self.phi(&state.x)?;
        let mut max_phi_increase = f64::NEG_INFINITY;
        let mut ascent_steps = 0;

        for t in 0..iterations {
            let next = self.step(&state)?;
            let displacement = next.x.distance(&state.x);
            if best.as_ref().is_none_or(|b| displacement < b.displacement) {
                best = Some(BestIterate {
                    t,
                    x: state.x.clone(),
                    displacement,
                });
            }
            let phi_next = self.phi(&next.x)?;
            let increase = phi_next - phi_current;
            max_phi_increase = max_phi_increase.max(increase);
            if increase > DESCENT_TOL {
                ascent_steps += 1;
            }
            phi_current = phi_next;
            state = next;
            if (t + 1) % record_every == 0 || t + 1 == iterations {
                trajectory.push(self.record(&state, displacement)?);
            }
        }

        Ok(RunOutcome {
            trajectory,
            final_state: state,
            best,
            eta: self.eta,
            max_phi_increase,
            ascent_steps,
        })
    }
}
