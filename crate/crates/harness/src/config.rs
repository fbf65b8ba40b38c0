//! Experiment configuration, read from a single TOML document.

use std::fmt;
use std::path::{Path, PathBuf};

use igd_core::congestion::InstanceSpec;
use igd_core::constraints::{ConstraintSet, ConstraintSpec};
use igd_core::game::{Game, GameDocument};
use igd_core::solver::{Initialization, SolverParams, StepSize};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Inline congestion instance. Exactly one of `instance` and `game` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    /// Path to a game file, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<PathBuf>,
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub mu: f64,
    #[serde(default = "default_eta")]
    pub eta: EtaConfig,
    pub iterations: usize,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub init: InitKind,
    #[serde(default)]
    pub seed: u64,
    /// Dirichlet concentration for `init = "dirichlet"`.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_record_every() -> usize {
    1
}

fn default_alpha() -> f64 {
    1.0
}

fn default_eta() -> EtaConfig {
    EtaConfig::Named(EtaName::Recipe)
}

/// `"recipe"` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaConfig {
    Fixed(f64),
    Named(EtaName),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaName {
    Recipe,
}

impl EtaConfig {
    pub fn step(self) -> StepSize {
        match self {
            Self::Fixed(eta) => StepSize::Fixed(eta),
            Self::Named(EtaName::Recipe) => StepSize::Recipe,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    #[default]
    Uniform,
    Dirichlet,
}

/// Grids swept as a Cartesian product. Omitted grids keep the base value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Gas budget applied to every player.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hw_slope: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_out_dir() }
    }
}

/// Game file layout: a `[game]` table plus per-player constraint lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub game: GameDocument,
    pub constraints: Vec<Vec<ConstraintSpec>>,
}

impl GameFile {
    pub fn from_parts(game: &Game, cs: &ConstraintSet) -> Result<Self> {
        Ok(Self {
            game: game.to_document(),
            constraints: cs.to_specs()?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        toml::from_str(&text).map_err(|e| HarnessError::parse(path, &e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| HarnessError::Serialize(e.to_string()))?;
        write(path, text.as_bytes())
    }

    pub fn build(&self) -> Result<(Game, ConstraintSet)> {
        let game = Game::from_document(self.game.clone())?;
        let cs = ConstraintSet::from_specs(game.space().action_counts(), &self.constraints)?;
        Ok((game, cs))
    }
}

/// A config whose instance is fully resolved, so it describes exactly one run.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub game: Game,
    pub constraints: ConstraintSet,
    /// Path names for congestion instances, `a0, a1, ...` otherwise.
    pub action_names: Vec<String>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::parse(origin, &e))
    }

    /// Reads a config and makes a relative `game` path relative to the file.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_toml(&read(path)?, path)?;
        if let Some(game) = &cfg.game {
            if game.is_relative() {
                let base = path.parent().unwrap_or(Path::new(""));
                cfg.game = Some(base.join(game));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| HarnessError::Serialize(e.to_string()))
    }

    pub fn solver_params(&self) -> SolverParams {
        SolverParams::new(self.solver.mu, self.solver.iterations)
            .with_step(self.solver.eta.step())
            .with_record_every(self.solver.record_every)
    }

    pub fn initialization(&self) -> Initialization {
        match self.solver.init {
            InitKind::Uniform => Initialization::Uniform,
            InitKind::Dirichlet => Initialization::Dirichlet {
                seed: self.solver.seed,
                alpha: self.solver.alpha,
            },
        }
    }

    /// Compiles the instance into a game and constraint set.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let (game, constraints, action_names) = match (&self.instance, &self.game) {
            (Some(spec), None) => {
                let instance = spec.build()?;
                let names = instance.network().paths().iter().map(|p| p.name.clone()).collect();
                let (game, cs) = instance.compile()?;
                (game, cs, names)
            }
            (None, Some(path)) => {
                let (game, cs) = GameFile::load(path)?.build()?;
                let names = (0..game.space().max_actions()).map(|a| format!("a{a}")).collect();
                (game, cs, names)
            }
            (Some(_), Some(_)) => {
                return Err(HarnessError::Invalid(
                    "set either [instance] or `game`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(HarnessError::Invalid(
                    "missing instance: add an [instance] table or a `game` file".into(),
                ))
            }
        };
        Ok(ResolvedConfig {
            config: self.clone(),
            game,
            constraints,
            action_names,
        })
    }

    /// SHA-256 of the canonical TOML form, without sweep and output settings.
    pub fn fingerprint(&self) -> Result<String> {
        let mut run = self.clone();
        run.sweep = None;
        run.output = OutputConfig::default();
        // The game file's content matters, not where it lives.
        let game_text = run.game.take().map(|p| read(&p)).transpose()?;
        let mut hasher = Sha256::new();
        hasher.update(run.to_toml()?.as_bytes());
        if let Some(text) = game_text {
            hasher.update(text.as_bytes());
        }
        Ok(hex::encode(hasher.finalize()))
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_toml() {
            Ok(text) => f.write_str(&text),
            Err(_) => Err(fmt::Error),
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
[instance]
players = 5
budgets = [13]

[solver]
mu = 1e-3
eta = "recipe"
iterations = 100
record_every = 10
"#;

    #[test]
    fn parses_recipe_and_numeric_eta() {
        let cfg = ExperimentConfig::from_toml(BASIC, Path::new("basic.toml")).unwrap();
        assert_eq!(cfg.solver.eta.step(), StepSize::Recipe);
        let fixed = BASIC.replace("\"recipe\"", "0.01");
        let cfg = ExperimentConfig::from_toml(&fixed, Path::new("basic.toml")).unwrap();
        assert_eq!(cfg.solver.eta.step(), StepSize::Fixed(0.01));
        let omitted = BASIC.replace("eta = \"recipe\"\n", "");
        let cfg = ExperimentConfig::from_toml(&omitted, Path::new("basic.toml")).unwrap();
        assert_eq!(cfg.solver.eta.step(), StepSize::Recipe);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let broken = BASIC.replace("mu = 1e-3", "mu = ");
        let err = ExperimentConfig::from_toml(&broken, Path::new("broken.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("broken.toml"), "{msg}");
        assert!(msg.contains("line 7"), "{msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let typo = BASIC.replace("record_every", "record_evry");
        assert!(ExperimentConfig::from_toml(&typo, Path::new("t.toml")).is_err());
    }

    #[test]
    fn fingerprint_ignores_output_and_sweep() {
        let cfg = ExperimentConfig::from_toml(BASIC, Path::new("a.toml")).unwrap();
        let mut other = cfg.clone();
        other.output.dir = PathBuf::from("elsewhere");
        other.sweep = Some(SweepConfig {
            mu: Some(vec![1.0]),
            ..Default::default()
        });
        assert_eq!(cfg.fingerprint().unwrap(), other.fingerprint().unwrap());
        other.solver.mu = 2e-3;
        assert_ne!(cfg.fingerprint().unwrap(), other.fingerprint().unwrap());
        assert_eq!(cfg.fingerprint().unwrap().len(), 64);
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ExperimentConfig::from_toml(BASIC, Path::new("a.toml")).unwrap();
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap(), Path::new("b.toml")).unwrap();
        assert_eq!(cfg.solver.eta.step(), again.solver.eta.step());
        assert_eq!(cfg.instance, again.instance);
    }

    #[test]
    fn instance_source_must_be_unique() {
        let mut cfg = ExperimentConfig::from_toml(BASIC, Path::new("a.toml")).unwrap();
        cfg.game = Some(PathBuf::from("g.toml"));
        assert!(matches!(cfg.resolve(), Err(HarnessError::Invalid(_))));
        cfg.instance = None;
        cfg.game = None;
        assert!(matches!(cfg.resolve(), Err(HarnessError::Invalid(_))));
    }
}
