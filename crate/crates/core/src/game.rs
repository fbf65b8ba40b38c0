//! Finite normal-form potential games over mixed strategies.
//!
//! Payoff tensors are dense and row-major over joint pure profiles, with
//! player 0 as the slowest-varying index: the profile `(a_0, ..., a_{n-1})`
//! lives at `sum_i a_i * stride_i` where `stride_{n-1} = 1` and
//! `stride_i = stride_{i+1} * |A_{i+1}|`. Serialized games use the same layout.
//!
//! All expectations are exact: they contract the tensor against every
//! player's mixed strategy, which costs `O(prod_i |A_i|)` per call.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest joint profile space we are willing to enumerate.
pub const MAX_PROFILES: u128 = 10_000_000;

/// Tolerance on `|sum(x_i) - 1|` for simplex membership.
pub const SIMPLEX_SUM_TOL: f64 = 1e-9;

/// Tolerance on negative entries for simplex membership.
pub const SIMPLEX_NEG_TOL: f64 = 1e-12;

/// Pure-profile potential identity tolerance.
pub const POTENTIAL_TOL: f64 = 1e-12;

/// Players and their action counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpace {
    actions: Vec<usize>,
}

impl ActionSpace {
    pub fn new(actions: Vec<usize>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidInstance("a game needs at least one player".into()));
        }
        if let Some(player) = actions.iter().position(|&a| a == 0) {
            return Err(Error::InvalidInstance(format!(
                "player {player} has an empty action set"
            )));
        }
        let space = Self { actions };
        space.checked_profile_count()?;
        Ok(space)
    }

    pub fn players(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self, player: usize) -> usize {
        self.actions[player]
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.actions
    }

    /// `A_max`, the largest action set.
    pub fn max_actions(&self) -> usize {
        self.actions.iter().copied().max().unwrap_or(0)
    }

    /// Total number of actions across players.
    pub fn total_actions(&self) -> usize {
        self.actions.iter().sum()
    }

    /// Number of joint pure profiles.
    pub fn profile_count(&self) -> usize {
        self.actions.iter().product()
    }

    fn checked_profile_count(&self) -> Result<usize> {
        let size = self
            .actions
            .iter()
            .fold(1u128, |acc, &a| acc.saturating_mul(a as u128));
        if size > MAX_PROFILES {
            return Err(Error::ProfileSpaceTooLarge {
                size,
                limit: MAX_PROFILES,
            });
        }
        Ok(size as usize)
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.players() {
            return Err(Error::PlayerOutOfRange {
                player,
                players: self.players(),
            });
        }
        Ok(())
    }

    /// Row-major strides, player 0 slowest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.players()];
        for i in (0..self.players().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.actions[i + 1];
        }
        strides
    }

    /// Flat tensor index of a pure profile.
    pub fn index_of(&self, profile: &[usize]) -> Result<usize> {
        if profile.len() != self.players() {
            return Err(Error::DimensionMismatch {
                what: "pure profile",
                expected: self.players(),
                found: profile.len(),
            });
        }
        let mut index = 0;
        for (&a, &count) in profile.iter().zip(&self.actions) {
            if a >= count {
                return Err(Error::IndexOutOfRange {
                    what: "action",
                    index: a,
                    len: count,
                });
            }
            index = index * count + a;
        }
        Ok(index)
    }

    /// Inverse of [`ActionSpace::index_of`].
    pub fn profile_of(&self, mut index: usize) -> Vec<usize> {
        let mut profile = vec![0; self.players()];
        for i in (0..self.players()).rev() {
            profile[i] = index % self.actions[i];
            index /= self.actions[i];
        }
        profile
    }

    /// Iterates every joint pure profile in tensor order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.profile_count()).map(move |k| self.profile_of(k))
    }
}

/// A mixed strategy per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    strategies: Vec<Vec<f64>>,
}

impl MixedProfile {
    /// Validates every strategy against the simplex tolerances.
    pub fn new(strategies: Vec<Vec<f64>>) -> Result<Self> {
        for (player, x) in strategies.iter().enumerate() {
            check_simplex(player, x)?;
        }
        Ok(Self { strategies })
    }

    pub fn uniform(space: &ActionSpace) -> Self {
        let strategies = space
            .action_counts()
            .iter()
            .map(|&a| vec![1.0 / a as f64; a])
            .collect();
        Self { strategies }
    }

    pub fn pure(space: &ActionSpace, profile: &[usize]) -> Result<Self> {
        space.index_of(profile)?;
        let strategies = profile
            .iter()
            .zip(space.action_counts())
            .map(|(&a, &count)| {
                let mut x = vec![0.0; count];
                x[a] = 1.0;
                x
            })
            .collect();
        Ok(Self { strategies })
    }

    /// Independent Dirichlet(`alpha`) draws, one per player.
    pub fn random<R: Rng + ?Sized>(space: &ActionSpace, alpha: f64, rng: &mut R) -> Result<Self> {
        let gamma = rand_distr::Gamma::new(alpha, 1.0).map_err(|_| Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "Dirichlet concentration must be positive",
        })?;
        let strategies = space
            .action_counts()
            .iter()
            .map(|&a| {
                let draws: Vec<f64> = (0..a).map(|_| rng.sample(gamma)).collect();
                let total: f64 = draws.iter().sum();
                if total > 0.0 {
                    draws.iter().map(|d| d / total).collect()
                } else {
                    vec![1.0 / a as f64; a]
                }
            })
            .collect();
        Ok(Self { strategies })
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, player: usize) -> &[f64] {
        &self.strategies[player]
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.strategies
    }

    pub fn into_strategies(self) -> Vec<Vec<f64>> {
        self.strategies
    }

    /// Replaces one player's strategy, keeping the others.
    pub fn with_strategy(&self, player: usize, x: Vec<f64>) -> Result<Self> {
        if player >= self.players() {
            return Err(Error::PlayerOutOfRange {
                player,
                players: self.players(),
            });
        }
        if x.len() != self.strategies[player].len() {
            return Err(Error::DimensionMismatch {
                what: "strategy",
                expected: self.strategies[player].len(),
                found: x.len(),
            });
        }
        check_simplex(player, &x)?;
        let mut strategies = self.strategies.clone();
        strategies[player] = x;
        Ok(Self { strategies })
    }

    /// Checks that the profile has one strategy of the right length per player.
    pub fn check_space(&self, space: &ActionSpace) -> Result<()> {
        if self.players() != space.players() {
            return Err(Error::DimensionMismatch {
                what: "number of strategies",
                expected: space.players(),
                found: self.players(),
            });
        }
        for (x, &count) in self.strategies.iter().zip(space.action_counts()) {
            if x.len() != count {
                return Err(Error::DimensionMismatch {
                    what: "strategy",
                    expected: count,
                    found: x.len(),
                });
            }
        }
        Ok(())
    }

    /// Euclidean distance between two profiles over the stacked vector.
    pub fn distance(&self, other: &Self) -> f64 {
        self.strategies
            .iter()
            .flatten()
            .zip(other.strategies.iter().flatten())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Largest simplex violation over players: max of `|sum - 1|` and negativity.
    pub fn simplex_violation(&self) -> f64 {
        self.strategies
            .iter()
            .map(|x| {
                let sum_err = (x.iter().sum::<f64>() - 1.0).abs();
                let neg = x.iter().fold(0.0f64, |m, &v| m.max(-v));
                sum_err.max(neg)
            })
            .fold(0.0, f64::max)
    }
}

fn check_simplex(player: usize, x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::NotOnSimplex {
            player,
            reason: "empty strategy".into(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotOnSimplex {
            player,
            reason: "non-finite entry".into(),
        });
    }
    if let Some(v) = x.iter().find(|&&v| v < -SIMPLEX_NEG_TOL) {
        return Err(Error::NotOnSimplex {
            player,
            reason: format!("negative entry {v}"),
        });
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
        return Err(Error::NotOnSimplex {
            player,
            reason: format!("entries sum to {sum}"),
        });
    }
    Ok(())
}

/// Outcome of [`Game::validate_potential`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialCheck {
    pub max_violation: f64,
    pub holds: bool,
}

/// Normal-form game with a potential tensor and one cost tensor per player.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    space: ActionSpace,
    potential: Vec<f64>,
    costs: Vec<Vec<f64>>,
}

impl Game {
    pub fn new(space: ActionSpace, potential: Vec<f64>, costs: Vec<Vec<f64>>) -> Result<Self> {
        let size = space.checked_profile_count()?;
        if potential.len() != size {
            return Err(Error::DimensionMismatch {
                what: "potential tensor",
                expected: size,
                found: potential.len(),
            });
        }
        if costs.len() != space.players() {
            return Err(Error::DimensionMismatch {
                what: "cost tensors",
                expected: space.players(),
                found: costs.len(),
            });
        }
        for c in &costs {
            if c.len() != size {
                return Err(Error::DimensionMismatch {
                    what: "cost tensor",
                    expected: size,
                    found: c.len(),
                });
            }
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("potential tensor"));
        }
        if costs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("cost tensor"));
        }
        Ok(Self {
            space,
            potential,
            costs,
        })
    }

    /// Exact potential game: every player's cost equals the potential.
    pub fn identical_interest(space: ActionSpace, potential: Vec<f64>) -> Result<Self> {
        let costs = vec![potential.clone(); space.players()];
        Self::new(space, potential, costs)
    }

    /// Random potential game: `C_i(a) = Phi(a) + D_i(a_{-i})` with entries
    /// of `Phi` and `D_i` uniform in `[0, scale)`.
    pub fn random_potential<R: Rng + ?Sized>(
        space: ActionSpace,
        scale: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let size = space.checked_profile_count()?;
        let potential: Vec<f64> = (0..size).map(|_| rng.random::<f64>() * scale).collect();
        let strides = space.strides();
        let costs = (0..space.players())
            .map(|i| {
                // Dummy term indexed by the profile with player i's action zeroed.
                let dummy: Vec<f64> = (0..size).map(|_| rng.random::<f64>() * scale).collect();
                (0..size)
                    .map(|k| {
                        let a_i = (k / strides[i]) % space.actions(i);
                        potential[k] + dummy[k - a_i * strides[i]]
                    })
                    .collect()
            })
            .collect();
        Self::new(space, potential, costs)
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    pub fn players(&self) -> usize {
        self.space.players()
    }

    pub fn potential_tensor(&self) -> &[f64] {
        &self.potential
    }

    pub fn cost_tensor(&self, player: usize) -> Result<&[f64]> {
        self.space.check_player(player)?;
        Ok(&self.costs[player])
    }

    pub fn potential_at(&self, profile: &[usize]) -> Result<f64> {
        Ok(self.potential[self.space.index_of(profile)?])
    }

    pub fn cost_at(&self, player: usize, profile: &[usize]) -> Result<f64> {
        self.space.check_player(player)?;
        Ok(self.costs[player][self.space.index_of(profile)?])
    }

    /// `Phi_max`, the largest potential entry.
    pub fn potential_max(&self) -> f64 {
        self.potential.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Phi_min`, the smallest potential entry.
    pub fn potential_min(&self) -> f64 {
        self.potential.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest absolute potential entry.
    pub fn potential_abs_max(&self) -> f64 {
        self.potential.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Multilinear extension of the potential: `E_{a ~ x}[Phi(a)]`.
    pub fn expected_potential(&self, x: &MixedProfile) -> Result<f64> {
        x.check_space(&self.space)?;
        Ok(contract(&self.potential, &self.space, x, None)[0])
    }

    /// `E_{a ~ x}[C_i(a)]`.
    pub fn expected_cost(&self, player: usize, x: &MixedProfile) -> Result<f64> {
        self.space.check_player(player)?;
        x.check_space(&self.space)?;
        Ok(contract(&self.costs[player], &self.space, x, None)[0])
    }

    /// `∇_{x_i}` of the multilinear potential: entry `a` is
    /// `E_{a_{-i} ~ x_{-i}}[Phi(a, a_{-i})]`.
    pub fn potential_gradient(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>> {
        self.space.check_player(player)?;
        x.check_space(&self.space)?;
        Ok(contract(&self.potential, &self.space, x, Some(player)))
    }

    /// `∇_{x_i} C_i`: entry `a` is `E_{a_{-i} ~ x_{-i}}[C_i(a, a_{-i})]`, the
    /// expected cost of pure action `a` against the other players.
    pub fn cost_gradient(&self, player: usize, x: &MixedProfile) -> Result<Vec<f64>> {
        self.space.check_player(player)?;
        x.check_space(&self.space)?;
        Ok(contract(&self.costs[player], &self.space, x, Some(player)))
    }

    /// Checks `C_i(a', a_{-i}) - C_i(a) = Phi(a', a_{-i}) - Phi(a)` over every
    /// player, pure profile and unilateral deviation.
    pub fn validate_potential(&self) -> PotentialCheck {
        let strides = self.space.strides();
        let mut max_violation = 0.0f64;
        for (i, cost) in self.costs.iter().enumerate() {
            let count = self.space.actions(i);
            for k in 0..self.potential.len() {
                let a_i = (k / strides[i]) % count;
                let base = k - a_i * strides[i];
                for dev in 0..count {
                    let kd = base + dev * strides[i];
                    let dc = cost[kd] - cost[k];
                    let dp = self.potential[kd] - self.potential[k];
                    max_violation = max_violation.max((dc - dp).abs());
                }
            }
        }
        PotentialCheck {
            max_violation,
            holds: max_violation <= POTENTIAL_TOL,
        }
    }

    pub fn to_document(&self) -> GameDocument {
        GameDocument {
            players: self.players(),
            actions: self.space.action_counts().to_vec(),
            potential: self.potential.clone(),
            costs: self.costs.clone(),
        }
    }

    pub fn from_document(doc: GameDocument) -> Result<Self> {
        if doc.players != doc.actions.len() {
            return Err(Error::DimensionMismatch {
                what: "actions list",
                expected: doc.players,
                found: doc.actions.len(),
            });
        }
        Self::new(ActionSpace::new(doc.actions)?, doc.potential, doc.costs)
    }
}

/// Serialized form of a [`Game`]; tensors are flat in the documented layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameDocument {
    pub players: usize,
    pub actions: Vec<usize>,
    pub potential: Vec<f64>,
    pub costs: Vec<Vec<f64>>,
}

/// Contracts `tensor` against every player's strategy except `keep`.
/// Returns a vector of length `|A_keep|`, or a single scalar when `keep` is `None`.
fn contract(tensor: &[f64], space: &ActionSpace, x: &MixedProfile, keep: Option<usize>) -> Vec<f64> {
    let n = space.players();
    let mut current = tensor.to_vec();
    let mut next = Vec::with_capacity(current.len());

    // Trailing axes, last first.
    let first_trailing = keep.map_or(0, |k| k + 1);
    for j in (first_trailing..n).rev() {
        let xj = x.strategy(j);
        let width = xj.len();
        next.clear();
        next.extend(
            current
                .chunks_exact(width)
                .map(|row| row.iter().zip(xj).map(|(t, p)| t * p).sum::<f64>()),
        );
        std::mem::swap(&mut current, &mut next);
    }

    // Leading axes, first first.
    if let Some(k) = keep {
        for j in 0..k {
            let xj = x.strategy(j);
            let rest = current.len() / xj.len();
            next.clear();
            next.resize(rest, 0.0);
            for (block, &p) in current.chunks_exact(rest).zip(xj) {
                if p != 0.0 {
                    for (acc, t) in next.iter_mut().zip(block) {
                        *acc += p * t;
                    }
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
    }
    current
}
