//! Private per-player convex constraints `g_{i,m}(x_i) <= 0`.
//!
//! Only affine constraints are shipped. General smooth convex constraints
//! plug in through [`ConvexConstraint`]; operations that are exact only for
//! affine functions (Slater margins, `G_max`) report
//! [`Error::Unsupported`] for them instead of approximating.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::MixedProfile;

/// A convex, `gamma`-smooth constraint on one player's mixed strategy.
pub trait ConvexConstraint: fmt::Debug + Send + Sync {
    /// Number of actions the constraint is defined over.
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Lipschitz constant of the gradient.
    fn smoothness(&self) -> f64;

    /// Upper bound on `||∇g(x)||` over the simplex.
    fn gradient_norm_bound(&self) -> f64;

    fn as_affine(&self) -> Option<&AffineConstraint> {
        None
    }
}

/// `g(x) = c^T x - b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineConstraint {
    coefficients: Vec<f64>,
    offset: f64,
}

impl AffineConstraint {
    pub fn new(coefficients: Vec<f64>, offset: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInstance("constraint over zero actions".into()));
        }
        if coefficients.iter().any(|c| !c.is_finite()) || !offset.is_finite() {
            return Err(Error::NonFinite("affine constraint"));
        }
        Ok(Self {
            coefficients,
            offset,
        })
    }

    /// Gas budget: expected consumption must not exceed `budget`.
    pub fn budget(consumption: Vec<f64>, budget: f64) -> Result<Self> {
        Self::new(consumption, budget)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Same constraint with the offset raised by `eps`, i.e. `g - eps <= 0`.
    pub fn relaxed(&self, eps: f64) -> Self {
        Self {
            coefficients: self.coefficients.clone(),
            offset: self.offset + eps,
        }
    }

    /// Minimum of `g` over the simplex, attained at a vertex.
    pub fn min_over_simplex(&self) -> f64 {
        self.coefficients.iter().copied().fold(f64::INFINITY, f64::min) - self.offset
    }

    /// Maximum of `g` over the simplex, attained at a vertex.
    pub fn max_over_simplex(&self) -> f64 {
        self.coefficients
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
            - self.offset
    }
}

impl ConvexConstraint for AffineConstraint {
    fn dim(&self) -> usize {
        self.coefficients.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.coefficients.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() - self.offset
    }

    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        self.coefficients.clone()
    }

    fn smoothness(&self) -> f64 {
        0.0
    }

    fn gradient_norm_bound(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn as_affine(&self) -> Option<&AffineConstraint> {
        Some(self)
    }
}

/// Config fragment for one constraint: either explicit affine data or the
/// gas-budget shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstraintSpec {
    Affine { coefficients: Vec<f64>, offset: f64 },
    Budget { consumption: Vec<f64>, budget: f64 },
}

impl ConstraintSpec {
    pub fn build(&self) -> Result<AffineConstraint> {
        match self {
            Self::Affine {
                coefficients,
                offset,
            } => AffineConstraint::new(coefficients.clone(), *offset),
            Self::Budget {
                consumption,
                budget,
            } => AffineConstraint::budget(consumption.clone(), *budget),
        }
    }
}

/// Per-player Slater diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterReport {
    /// `xi_{i,m}`: minimum of each constraint over the simplex.
    pub per_constraint: Vec<f64>,
    /// Weakest margin, `max_m xi_{i,m}`; `-inf` without constraints.
    pub margin: f64,
    /// A simplex vertex strictly feasible for every constraint, when one exists.
    pub witness_vertex: Option<usize>,
}

/// Constraints of every player.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    actions: Vec<usize>,
    per_player: Vec<Vec<Arc<dyn ConvexConstraint>>>,
}

impl ConstraintSet {
    /// No constraints for any player.
    pub fn unconstrained(actions: &[usize]) -> Self {
        Self {
            actions: actions.to_vec(),
            per_player: vec![Vec::new(); actions.len()],
        }
    }

    pub fn from_affine(actions: &[usize], per_player: Vec<Vec<AffineConstraint>>) -> Result<Self> {
        let mut cs = Self::unconstrained(actions);
        if per_player.len() != actions.len() {
            return Err(Error::DimensionMismatch {
                what: "constraint lists",
                expected: actions.len(),
                found: per_player.len(),
            });
        }
        for (player, list) in per_player.into_iter().enumerate() {
            for c in list {
                cs.push(player, Arc::new(c))?;
            }
        }
        Ok(cs)
    }

    pub fn from_specs(actions: &[usize], specs: &[Vec<ConstraintSpec>]) -> Result<Self> {
        let built = specs
            .iter()
            .map(|list| list.iter().map(ConstraintSpec::build).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_affine(actions, built)
    }

    /// Adds a constraint to `player`.
    pub fn push(&mut self, player: usize, constraint: Arc<dyn ConvexConstraint>) -> Result<()> {
        self.check_player(player)?;
        if constraint.dim() != self.actions[player] {
            return Err(Error::DimensionMismatch {
                what: "constraint coefficients",
                expected: self.actions[player],
                found: constraint.dim(),
            });
        }
        self.per_player[player].push(constraint);
        Ok(())
    }

    pub fn players(&self) -> usize {
        self.per_player.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.actions
    }

    /// `d_i`.
    pub fn count(&self, player: usize) -> usize {
        self.per_player[player].len()
    }

    /// `d = sum_i d_i`.
    pub fn total(&self) -> usize {
        self.per_player.iter().map(Vec::len).sum()
    }

    pub fn constraints(&self, player: usize) -> &[Arc<dyn ConvexConstraint>] {
        &self.per_player[player]
    }

    /// `gamma`, the largest constraint smoothness (0 when all are affine).
    pub fn smoothness(&self) -> f64 {
        self.per_player
            .iter()
            .flatten()
            .map(|c| c.smoothness())
            .fold(0.0, f64::max)
    }

    pub fn is_affine(&self) -> bool {
        self.per_player
            .iter()
            .flatten()
            .all(|c| c.as_affine().is_some())
    }

    fn check_player(&self, player: usize) -> Result<()> {
        if player >= self.players() {
            return Err(Error::PlayerOutOfRange {
                player,
                players: self.players(),
            });
        }
        Ok(())
    }

    fn check_strategy(&self, player: usize, x_i: &[f64]) -> Result<()> {
        self.check_player(player)?;
        if x_i.len() != self.actions[player] {
            return Err(Error::DimensionMismatch {
                what: "strategy",
                expected: self.actions[player],
                found: x_i.len(),
            });
        }
        Ok(())
    }

    /// `(g_{i,1}(x_i), ..., g_{i,d_i}(x_i))`.
    pub fn evaluate(&self, player: usize, x_i: &[f64]) -> Result<Vec<f64>> {
        self.check_strategy(player, x_i)?;
        Ok(self.per_player[player].iter().map(|c| c.value(x_i)).collect())
    }

    /// Constraint values of every player, stacked per player.
    pub fn evaluate_all(&self, x: &MixedProfile) -> Result<Vec<Vec<f64>>> {
        (0..self.players())
            .map(|i| self.evaluate(i, x.strategy(i)))
            .collect()
    }

    /// `∇ g_{i,m}`; constant for affine constraints.
    pub fn gradient(&self, player: usize, m: usize) -> Result<Vec<f64>> {
        let c = self.constraint(player, m)?;
        match c.as_affine() {
            Some(a) => Ok(a.coefficients().to_vec()),
            None => Err(Error::Unsupported("constant gradient of a non-affine constraint")),
        }
    }

    /// `∇ g_{i,m}(x_i)`.
    pub fn gradient_at(&self, player: usize, m: usize, x_i: &[f64]) -> Result<Vec<f64>> {
        self.check_strategy(player, x_i)?;
        Ok(self.constraint(player, m)?.gradient(x_i))
    }

    fn constraint(&self, player: usize, m: usize) -> Result<&Arc<dyn ConvexConstraint>> {
        self.check_player(player)?;
        self.per_player[player]
            .get(m)
            .ok_or(Error::IndexOutOfRange {
                what: "constraint",
                index: m,
                len: self.per_player[player].len(),
            })
    }

    /// Sum of hinge violations `sum_{i,m} max(0, g_{i,m}(x_i))`.
    pub fn violation(&self, x: &MixedProfile) -> f64 {
        self.per_player
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |c| c.value(x.strategy(i)).max(0.0)))
            .sum()
    }

    /// Slater margin `xi_i`: the largest, over constraints, of each
    /// constraint's minimum on the simplex. Negative certifies Slater's
    /// condition for the player.
    pub fn slater_margin(&self, player: usize) -> Result<f64> {
        Ok(self.slater_report(player)?.margin)
    }

    pub fn slater_report(&self, player: usize) -> Result<SlaterReport> {
        self.check_player(player)?;
        let affine = self.affine(player)?;
        let per_constraint: Vec<f64> = affine.iter().map(|c| c.min_over_simplex()).collect();
        let margin = per_constraint
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let witness_vertex = (0..self.actions[player])
            .find(|&a| affine.iter().all(|c| c.coefficients()[a] - c.offset() < 0.0));
        Ok(SlaterReport {
            per_constraint,
            margin,
            witness_vertex,
        })
    }

    /// `G_max`: the largest constraint value over players, constraints and
    /// the simplex. `-inf` when there are no constraints.
    pub fn g_max(&self) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for player in 0..self.players() {
            for c in self.affine(player)? {
                best = best.max(c.max_over_simplex());
            }
        }
        Ok(best)
    }

    /// Affine views of the player's constraints.
    pub fn affine(&self, player: usize) -> Result<Vec<&AffineConstraint>> {
        self.per_player[player]
            .iter()
            .map(|c| {
                c.as_affine()
                    .ok_or(Error::Unsupported("vertex enumeration of constraint extremes"))
            })
            .collect()
    }

    /// Constraint set with every affine offset raised by `eps`.
    pub fn relaxed(&self, eps: f64) -> Result<Self> {
        let per_player = (0..self.players())
            .map(|i| Ok(self.affine(i)?.into_iter().map(|c| c.relaxed(eps)).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_affine(&self.actions, per_player)
    }

    /// Serializable form; fails for non-affine constraints.
    pub fn to_specs(&self) -> Result<Vec<Vec<ConstraintSpec>>> {
        (0..self.players())
            .map(|i| {
                Ok(self
                    .affine(i)?
                    .into_iter()
                    .map(|c| ConstraintSpec::Affine {
                        coefficients: c.coefficients().to_vec(),
                        offset: c.offset(),
                    })
                    .collect())
            })
            .collect()
    }

    /// Whether `x` satisfies every constraint within `tol`.
    pub fn is_feasible(&self, x: &MixedProfile, tol: f64) -> bool {
        self.violation(x) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAS: [f64; 4] = [2.0, 3.0, 4.0, 10.0];

    fn gas_set(budgets: &[f64]) -> ConstraintSet {
        let lists = budgets
            .iter()
            .map(|&b| vec![AffineConstraint::budget(GAS.to_vec(), b).unwrap()])
            .collect();
        ConstraintSet::from_affine(&vec![4; budgets.len()], lists).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let cs = gas_set(&[4.0]);
        assert_eq!(cs.evaluate(0, &[0.0, 0.0, 1.0, 0.0]).unwrap(), vec![0.0]);

        let zero = ConstraintSet::from_affine(
            &[3],
            vec![vec![AffineConstraint::new(vec![0.0; 3], 1.0).unwrap()]],
        )
        .unwrap();
        assert_eq!(zero.evaluate(0, &[0.2, 0.3, 0.5]).unwrap(), vec![-1.0]);

        // Hand dot product: (2 + 3 + 4 + 10) / 4 - 10.
        let cs = gas_set(&[10.0]);
        let g = cs.evaluate(0, &[0.25; 4]).unwrap();
        assert!((g[0] - (-5.25)).abs() < 1e-15);
        assert!(cs.evaluate(0, &[0.5, 0.5]).is_err());
        assert!(cs.evaluate(1, &[0.25; 4]).is_err());
    }

    #[test]
    fn gradient_examples() {
        let cs = gas_set(&[4.0]);
        assert_eq!(cs.gradient(0, 0).unwrap(), GAS.to_vec());
        let zero = ConstraintSet::from_affine(
            &[2],
            vec![vec![
                AffineConstraint::new(vec![0.0, 0.0], 1.0).unwrap(),
                AffineConstraint::new(vec![2.0 * 1.5, 2.0 * -0.5], 2.0 * 0.25).unwrap(),
            ]],
        )
        .unwrap();
        assert_eq!(zero.gradient(0, 0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(zero.gradient(0, 1).unwrap(), vec![3.0, -1.0]);
        assert!(matches!(
            zero.gradient(0, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn violation_is_a_hinge_sum() {
        let cs = ConstraintSet::from_affine(
            &[2, 2],
            vec![
                vec![
                    AffineConstraint::new(vec![0.3, 0.3], 0.0).unwrap(),
                    AffineConstraint::new(vec![-0.2, -0.2], 0.0).unwrap(),
                ],
                vec![],
            ],
        )
        .unwrap();
        let x = MixedProfile::new(vec![vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!((cs.violation(&x) - 0.3).abs() < 1e-15);

        let cs = ConstraintSet::from_affine(
            &[2, 2],
            vec![
                vec![AffineConstraint::new(vec![1.1, 1.1], 1.0).unwrap()],
                vec![AffineConstraint::new(vec![0.6, 0.6], 0.5).unwrap()],
            ],
        )
        .unwrap();
        assert!((cs.violation(&x) - 0.2).abs() < 1e-12);

        let feasible = gas_set(&[13.0, 13.0]);
        let u = MixedProfile::uniform(&crate::game::ActionSpace::new(vec![4, 4]).unwrap());
        assert_eq!(feasible.violation(&u), 0.0);
    }

    #[test]
    fn slater_margin_examples() {
        // The cheapest route is strictly feasible: margin = 2 - budget.
        assert_eq!(gas_set(&[10.0]).slater_margin(0).unwrap(), -8.0);
        assert_eq!(gas_set(&[11.0]).slater_margin(0).unwrap(), -9.0);
        assert_eq!(gas_set(&[2.0]).slater_margin(0).unwrap(), 0.0);
        let report = gas_set(&[11.0]).slater_report(0).unwrap();
        assert_eq!(report.witness_vertex, Some(0));
        let none = ConstraintSet::unconstrained(&[3]);
        assert_eq!(none.slater_margin(0).unwrap(), f64::NEG_INFINITY);
        // Margin 0 means no strictly feasible vertex exists.
        assert_eq!(gas_set(&[2.0]).slater_report(0).unwrap().witness_vertex, None);
    }

    #[test]
    fn g_max_examples() {
        assert_eq!(gas_set(&[2.0]).g_max().unwrap(), 8.0);
        let neg = ConstraintSet::from_affine(
            &[3],
            vec![vec![AffineConstraint::new(vec![0.0; 3], 1.0).unwrap()]],
        )
        .unwrap();
        assert_eq!(neg.g_max().unwrap(), -1.0);
        let single = ConstraintSet::from_affine(
            &[2],
            vec![vec![AffineConstraint::new(vec![0.0, 5.0], 1.0).unwrap()]],
        )
        .unwrap();
        assert_eq!(single.g_max().unwrap(), 4.0);
    }

    #[derive(Debug)]
    struct SquaredNorm;

    impl ConvexConstraint for SquaredNorm {
        fn dim(&self) -> usize {
            2
        }
        fn value(&self, x: &[f64]) -> f64 {
            x.iter().map(|v| v * v).sum::<f64>() - 0.6
        }
        fn gradient(&self, x: &[f64]) -> Vec<f64> {
            x.iter().map(|v| 2.0 * v).collect()
        }
        fn smoothness(&self) -> f64 {
            2.0
        }
        fn gradient_norm_bound(&self) -> f64 {
            2.0
        }
    }

    #[test]
    fn general_constraints_plug_in_but_vertex_ops_are_unsupported() {
        let mut cs = ConstraintSet::unconstrained(&[2]);
        cs.push(0, Arc::new(SquaredNorm)).unwrap();
        assert_eq!(cs.smoothness(), 2.0);
        assert!(!cs.is_affine());
        let g = cs.evaluate(0, &[0.5, 0.5]).unwrap();
        assert!((g[0] + 0.1).abs() < 1e-15);
        assert_eq!(cs.gradient_at(0, 0, &[0.5, 0.5]).unwrap(), vec![1.0, 1.0]);
        assert!(matches!(cs.slater_margin(0), Err(Error::Unsupported(_))));
        assert!(matches!(cs.g_max(), Err(Error::Unsupported(_))));
        assert!(cs.push(0, Arc::new(AffineConstraint::new(vec![1.0; 3], 0.0).unwrap())).is_err());
    }

    #[test]
    fn spec_shorthand_expands_to_affine() {
        let specs: Vec<ConstraintSpec> = vec![
            ConstraintSpec::Budget {
                consumption: GAS.to_vec(),
                budget: 4.0,
            },
            ConstraintSpec::Affine {
                coefficients: vec![1.0, 0.0, 0.0, 0.0],
                offset: 0.5,
            },
        ];
        let cs = ConstraintSet::from_specs(&[4], &[specs]).unwrap();
        assert_eq!(cs.count(0), 2);
        assert_eq!(cs.affine(0).unwrap()[0], &AffineConstraint::new(GAS.to_vec(), 4.0).unwrap());
    }
}
