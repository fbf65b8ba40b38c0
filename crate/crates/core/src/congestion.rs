//! Atomic congestion games on a set of source-target paths.
//!
//! Each player picks one path; an edge's per-user cost depends on its load
//! through an affine function `c_e(j) = slope * j + intercept`. Compiling an
//! instance enumerates every joint path choice into the dense cost and
//! Rosenthal potential tensors of a [`Game`], plus one gas-budget constraint
//! per player.

use serde::{Deserialize, Serialize};

use crate::constraints::{AffineConstraint, ConstraintSet};
use crate::error::{Error, Result};
use crate::game::{ActionSpace, Game};

/// Per-edge congestion cost `c_e(j) = slope * j + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCost {
    pub slope: f64,
    #[serde(default)]
    pub intercept: f64,
}

impl EdgeCost {
    pub fn linear(slope: f64) -> Self {
        Self {
            slope,
            intercept: 0.0,
        }
    }

    /// Cost paid by each user when `load` players share the edge.
    pub fn at(&self, load: usize) -> f64 {
        self.slope * load as f64 + self.intercept
    }

    /// `sum_{j=1}^{load} c_e(j)`.
    pub fn cumulative(&self, load: usize) -> f64 {
        (1..=load).map(|j| self.at(j)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub name: String,
    pub edges: Vec<usize>,
    /// Gas consumed by traversing the path.
    pub gas: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    edges: Vec<EdgeCost>,
    paths: Vec<Path>,
}

impl Network {
    pub fn new(edges: Vec<EdgeCost>, paths: Vec<Path>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidInstance("network has no paths".into()));
        }
        for e in &edges {
            if !e.slope.is_finite() || !e.intercept.is_finite() {
                return Err(Error::NonFinite("edge congestion function"));
            }
            if e.slope < 0.0 {
                return Err(Error::InvalidInstance(format!(
                    "negative congestion slope {}",
                    e.slope
                )));
            }
        }
        for p in &paths {
            if p.edges.is_empty() {
                return Err(Error::InvalidInstance(format!("path {} has no edges", p.name)));
            }
            if let Some(&bad) = p.edges.iter().find(|&&e| e >= edges.len()) {
                return Err(Error::IndexOutOfRange {
                    what: "edge",
                    index: bad,
                    len: edges.len(),
                });
            }
            if !p.gas.is_finite() {
                return Err(Error::NonFinite("path gas cost"));
            }
        }
        Ok(Self { edges, paths })
    }

    /// Edge-disjoint chains; chain `k` has `lengths[k]` unit edges sharing
    /// the cost `costs[k]`, and gas cost equal to its length.
    pub fn disjoint_chains(names: &[&str], lengths: &[usize], costs: &[EdgeCost]) -> Result<Self> {
        if names.len() != lengths.len() || lengths.len() != costs.len() {
            return Err(Error::InvalidInstance(
                "chain names, lengths and costs differ in length".into(),
            ));
        }
        let mut edges = Vec::new();
        let mut paths = Vec::new();
        for ((name, &len), &cost) in names.iter().zip(lengths).zip(costs) {
            let start = edges.len();
            edges.extend(std::iter::repeat_n(cost, len));
            paths.push(Path {
                name: (*name).to_string(),
                edges: (start..start + len).collect(),
                gas: len as f64,
            });
        }
        Self::new(edges, paths)
    }

    pub fn edges(&self) -> &[EdgeCost] {
        &self.edges
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path_gas(&self) -> Vec<f64> {
        self.paths.iter().map(|p| p.gas).collect()
    }

    fn check_profile(&self, profile: &[usize]) -> Result<()> {
        if let Some(&bad) = profile.iter().find(|&&p| p >= self.paths.len()) {
            return Err(Error::IndexOutOfRange {
                what: "path",
                index: bad,
                len: self.paths.len(),
            });
        }
        Ok(())
    }

    /// Number of players on each path.
    pub fn path_loads(&self, profile: &[usize]) -> Result<Vec<usize>> {
        self.check_profile(profile)?;
        let mut loads = vec![0; self.paths.len()];
        for &p in profile {
            loads[p] += 1;
        }
        Ok(loads)
    }

    /// `ell_e`: number of players whose path uses each edge.
    pub fn edge_loads(&self, profile: &[usize]) -> Result<Vec<usize>> {
        self.check_profile(profile)?;
        let mut loads = vec![0; self.edges.len()];
        for &p in profile {
            for &e in &self.paths[p].edges {
                loads[e] += 1;
            }
        }
        Ok(loads)
    }

    /// Rosenthal potential `sum_e sum_{j=1}^{ell_e} c_e(j)`.
    pub fn rosenthal_potential(&self, profile: &[usize]) -> Result<f64> {
        let loads = self.edge_loads(profile)?;
        Ok(self.potential_from_loads(&loads))
    }

    /// `sum_{e in path(player)} c_e(ell_e)`.
    pub fn player_cost(&self, profile: &[usize], player: usize) -> Result<f64> {
        let loads = self.edge_loads(profile)?;
        let &choice = profile.get(player).ok_or(Error::PlayerOutOfRange {
            player,
            players: profile.len(),
        })?;
        Ok(self.path_cost(choice, &loads))
    }

    fn potential_from_loads(&self, loads: &[usize]) -> f64 {
        self.edges
            .iter()
            .zip(loads)
            .map(|(c, &l)| c.cumulative(l))
            .sum()
    }

    fn path_cost(&self, path: usize, loads: &[usize]) -> f64 {
        self.paths[path]
            .edges
            .iter()
            .map(|&e| self.edges[e].at(loads[e]))
            .sum()
    }
}

/// A congestion game with one gas budget per player.
#[derive(Debug, Clone, PartialEq)]
pub struct CongestionInstance {
    network: Network,
    budgets: Vec<f64>,
}

impl CongestionInstance {
    pub fn new(network: Network, budgets: Vec<f64>) -> Result<Self> {
        if budgets.is_empty() {
            return Err(Error::InvalidInstance("instance has no players".into()));
        }
        if budgets.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("gas budget"));
        }
        Ok(Self { network, budgets })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn players(&self) -> usize {
        self.budgets.len()
    }

    pub fn budgets(&self) -> &[f64] {
        &self.budgets
    }

    /// Enumerates every joint path choice into a potential game and builds
    /// one gas constraint `sum_p gas(p) x_i(p) - budget_i <= 0` per player.
    pub fn compile(&self) -> Result<(Game, ConstraintSet)> {
        let n = self.players();
        let paths = self.network.paths.len();
        let space = ActionSpace::new(vec![paths; n])?;
        let size = space.profile_count();
        let mut potential = Vec::with_capacity(size);
        let mut costs = vec![Vec::with_capacity(size); n];
        let mut loads = vec![0usize; self.network.edges.len()];
        for k in 0..size {
            let profile = space.profile_of(k);
            loads.iter_mut().for_each(|l| *l = 0);
            for &p in &profile {
                for &e in &self.network.paths[p].edges {
                    loads[e] += 1;
                }
            }
            potential.push(self.network.potential_from_loads(&loads));
            for (i, &p) in profile.iter().enumerate() {
                costs[i].push(self.network.path_cost(p, &loads));
            }
        }
        let game = Game::new(space, potential, costs)?;
        let gas = self.network.path_gas();
        let constraints = self
            .budgets
            .iter()
            .map(|&b| Ok(vec![AffineConstraint::budget(gas.clone(), b)?]))
            .collect::<Result<Vec<_>>>()?;
        let cs = ConstraintSet::from_affine(&vec![paths; n], constraints)?;
        Ok((game, cs))
    }
}

/// Route names of the four-route network.
pub const ROUTE_NAMES: [&str; 4] = ["R1", "R2", "R3", "HW"];

/// Route lengths (and gas costs) of the four-route network.
pub const ROUTE_LENGTHS: [usize; 4] = [2, 3, 4, 10];

/// Per-edge congestion slope on the three local routes.
pub const LOCAL_SLOPE: f64 = 1.0;

/// Default per-edge congestion slope on the highway.
pub const HIGHWAY_SLOPE: f64 = 0.01;

/// Default per-player budgets: a spread from the tightest budget upward.
pub const DEFAULT_BUDGETS: [f64; 5] = [2.0, 3.0, 4.0, 6.0, 9.0];

/// Five drivers choosing among three short local routes and a long, lightly
/// congested highway, with the default budget spread.
pub fn default_instance() -> CongestionInstance {
    four_route_instance(&DEFAULT_BUDGETS, HIGHWAY_SLOPE).expect("default instance is valid")
}

/// The four-route network with the given budgets (one per player) and
/// highway slope.
pub fn four_route_instance(budgets: &[f64], highway_slope: f64) -> Result<CongestionInstance> {
    let local = EdgeCost::linear(LOCAL_SLOPE);
    let network = Network::disjoint_chains(
        &ROUTE_NAMES,
        &ROUTE_LENGTHS,
        &[local, local, local, EdgeCost::linear(highway_slope)],
    )?;
    CongestionInstance::new(network, budgets.to_vec())
}

/// Path entry of an instance config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    #[serde(default)]
    pub name: Option<String>,
    /// Number of unit-length edges; also the gas cost.
    pub edges: usize,
    pub slope: f64,
    #[serde(default)]
    pub intercept: f64,
    /// `hw_slope` overrides the slope of highway paths.
    #[serde(default)]
    pub highway: bool,
}

/// Instance config: `paths`, `players`, `budgets`, `hw_slope`. Omitted paths
/// default to the four-route network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default)]
    pub paths: Option<Vec<PathSpec>>,
    pub players: usize,
    /// One budget per player, or a single budget shared by all.
    pub budgets: Vec<f64>,
    #[serde(default)]
    pub hw_slope: Option<f64>,
}

impl InstanceSpec {
    pub fn four_route(budgets: Vec<f64>, hw_slope: f64) -> Self {
        Self {
            paths: None,
            players: budgets.len(),
            budgets,
            hw_slope: Some(hw_slope),
        }
    }

    pub fn default_paths() -> Vec<PathSpec> {
        ROUTE_NAMES
            .iter()
            .zip(ROUTE_LENGTHS)
            .map(|(name, len)| {
                let highway = *name == "HW";
                PathSpec {
                    name: Some((*name).to_string()),
                    edges: len,
                    slope: if highway { HIGHWAY_SLOPE } else { LOCAL_SLOPE },
                    intercept: 0.0,
                    highway,
                }
            })
            .collect()
    }

    /// Budgets expanded to one per player.
    pub fn player_budgets(&self) -> Result<Vec<f64>> {
        match self.budgets.len() {
            1 => Ok(vec![self.budgets[0]; self.players]),
            n if n == self.players => Ok(self.budgets.clone()),
            n => Err(Error::DimensionMismatch {
                what: "budgets",
                expected: self.players,
                found: n,
            }),
        }
    }

    pub fn build(&self) -> Result<CongestionInstance> {
        if self.players == 0 {
            return Err(Error::InvalidInstance("instance has no players".into()));
        }
        let paths = self.paths.clone().unwrap_or_else(Self::default_paths);
        let names: Vec<String> = paths
            .iter()
            .enumerate()
            .map(|(k, p)| p.name.clone().unwrap_or_else(|| format!("P{}", k + 1)))
            .collect();
        let costs: Vec<EdgeCost> = paths
            .iter()
            .map(|p| EdgeCost {
                slope: match (p.highway, self.hw_slope) {
                    (true, Some(s)) => s,
                    _ => p.slope,
                },
                intercept: p.intercept,
            })
            .collect();
        let lengths: Vec<usize> = paths.iter().map(|p| p.edges).collect();
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let network = Network::disjoint_chains(&name_refs, &lengths, &costs)?;
        CongestionInstance::new(network, self.player_budgets()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::MixedProfile;

    fn single_edge_pair() -> Network {
        Network::new(
            vec![EdgeCost::linear(1.0)],
            vec![Path {
                name: "e".into(),
                edges: vec![0],
                gas: 1.0,
            }],
        )
        .unwrap()
    }

    #[test]
    fn rosenthal_examples() {
        let net = single_edge_pair();
        assert_eq!(net.rosenthal_potential(&[0, 0]).unwrap(), 3.0);
        assert_eq!(net.rosenthal_potential(&[]).unwrap(), 0.0);

        let split = Network::disjoint_chains(
            &["a", "b"],
            &[1, 1],
            &[EdgeCost::linear(1.0), EdgeCost::linear(1.0)],
        )
        .unwrap();
        assert_eq!(split.rosenthal_potential(&[0, 1]).unwrap(), 2.0);
        assert!(split.rosenthal_potential(&[0, 2]).is_err());
    }

    #[test]
    fn player_cost_examples() {
        let net = single_edge_pair();
        assert_eq!(net.player_cost(&[0, 0], 0).unwrap(), 2.0);
        assert_eq!(net.player_cost(&[0, 0], 1).unwrap(), 2.0);

        let highway = Network::disjoint_chains(&["hw"], &[3], &[EdgeCost::linear(0.01)]).unwrap();
        assert!((highway.player_cost(&[0], 0).unwrap() - 0.03).abs() < 1e-15);

        let long = Network::disjoint_chains(&["p"], &[7], &[EdgeCost::linear(1.0)]).unwrap();
        assert_eq!(long.player_cost(&[0], 0).unwrap(), 7.0);
        assert!(long.player_cost(&[0], 1).is_err());
    }

    #[test]
    fn compile_yields_exact_potential_game() {
        let (game, cs) = four_route_instance(&[4.0; 5], HIGHWAY_SLOPE)
            .unwrap()
            .compile()
            .unwrap();
        assert_eq!(game.space().profile_count(), 1024);
        assert!(game.validate_potential().max_violation <= 1e-12);
        let gas = cs.affine(0).unwrap()[0].clone();
        assert_eq!(gas, AffineConstraint::new(vec![2.0, 3.0, 4.0, 10.0], 4.0).unwrap());
    }

    #[test]
    fn single_player_potential_tracks_cost() {
        let (game, _) = four_route_instance(&[10.0], HIGHWAY_SLOPE)
            .unwrap()
            .compile()
            .unwrap();
        let phi = game.potential_tensor();
        let c = game.cost_tensor(0).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert!(((phi[a] - phi[b]) - (c[a] - c[b])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn loads_conserve_players() {
        let net = default_instance().network().clone();
        let space = ActionSpace::new(vec![4; 5]).unwrap();
        for profile in space.profiles() {
            assert_eq!(net.path_loads(&profile).unwrap().iter().sum::<usize>(), 5);
        }
    }

    #[test]
    fn highway_dominates_without_binding_budgets() {
        let inst = four_route_instance(&[13.0; 5], HIGHWAY_SLOPE).unwrap();
        let net = inst.network();
        let space = ActionSpace::new(vec![4; 5]).unwrap();
        // HW beats every other route against every opponent profile.
        for profile in space.profiles() {
            for i in 0..5 {
                let mut p = profile.clone();
                p[i] = 3;
                let hw = net.player_cost(&p, i).unwrap();
                for alt in 0..3 {
                    p[i] = alt;
                    assert!(hw < net.player_cost(&p, i).unwrap());
                }
            }
        }
        let everyone_on_hw = net.player_cost(&[3; 5], 0).unwrap();
        let lone_r1 = net.player_cost(&[0, 3, 3, 3, 3], 0).unwrap();
        assert!(everyone_on_hw < lone_r1);
        assert_eq!(lone_r1, 2.0);
    }

    #[test]
    fn tight_budget_leaves_only_r1() {
        let (_, cs) = four_route_instance(&[2.0; 5], HIGHWAY_SLOPE)
            .unwrap()
            .compile()
            .unwrap();
        let space = ActionSpace::new(vec![4]).unwrap();
        let feasible: Vec<usize> = (0..4)
            .filter(|&a| {
                let x = MixedProfile::pure(&space, &[a]).unwrap();
                cs.evaluate(0, x.strategy(0)).unwrap()[0] <= 0.0
            })
            .collect();
        assert_eq!(feasible, vec![0]);
    }

    #[test]
    fn instance_spec_defaults_and_overrides() {
        let spec = InstanceSpec::four_route(vec![3.0], 0.05);
        assert!(spec.build().is_ok());
        let spec = InstanceSpec {
            players: 3,
            ..InstanceSpec::four_route(vec![4.0], 0.05)
        };
        let inst = spec.build().unwrap();
        assert_eq!(inst.budgets(), &[4.0, 4.0, 4.0]);
        assert_eq!(inst.network().edges()[9].slope, 0.05);
        assert_eq!(inst.network().edges()[0].slope, 1.0);

        let bad = InstanceSpec {
            players: 3,
            budgets: vec![1.0, 2.0],
            ..spec
        };
        assert!(bad.build().is_err());
        assert!(Network::new(
            vec![EdgeCost::linear(-1.0)],
            vec![Path {
                name: "x".into(),
                edges: vec![0],
                gas: 1.0
            }]
        )
        .is_err());
    }
}
