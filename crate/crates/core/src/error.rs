use thiserror::Error;

/// Errors raised by the game, constraint, solver and metric operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("player index {player} out of range for a game with {players} players")]
    PlayerOutOfRange { player: usize, players: usize },

    #[error("{what} index {index} out of range (length {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("joint profile space has {size} entries, above the enumeration limit of {limit}")]
    ProfileSpaceTooLarge { size: u128, limit: u128 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("strategy of player {player} is not on the probability simplex: {reason}")]
    NotOnSimplex { player: usize, reason: String },

    #[error("feasible region of player {player} is empty")]
    Infeasible { player: usize },

    #[error("Slater's condition fails for player {player} (margin {margin})")]
    SlaterViolated { player: usize, margin: f64 },

    #[error("unsupported for non-affine constraints: {0}")]
    Unsupported(&'static str),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
