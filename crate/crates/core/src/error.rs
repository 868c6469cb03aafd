use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("malformed Cayley table{}: {reason}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    MalformedCayleyTable { row: Option<usize>, reason: String },
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("group of order {order} exceeds the cap of {cap} for this operation")]
    TooLarge { order: u64, cap: u64 },
    #[error("bad letter {letter} for rank {rank}")]
    BadLetter { letter: i64, rank: usize },
    #[error("word too long: {len} letters (limit {limit})")]
    WordTooLong { len: usize, limit: usize },
    #[error("the zero vector has no Bezout certificate")]
    ZeroVector,
    #[error("the empty word is not allowed here")]
    EmptyWord,
    #[error("word has rank {word} but {given} elements were supplied")]
    RankMismatch { word: usize, given: usize },
    #[error("enumeration budget exceeded: {needed} evaluations (budget {budget})")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("word has gamma 0; an explicit exponent m is required")]
    GammaZeroWithoutExplicitM,
    #[error("state space of {states} exceeds the cap of {cap}")]
    StateCapExceeded { states: u128, cap: u128 },
    #[error("step set does not generate the group")]
    NotGenerating,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not in the automorphism catalog")]
    NotInCatalog(String),
    #[error("group is not perfect")]
    NotPerfect,
    #[error("lifted tuple does not generate the extension")]
    LiftFailedVerification,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Budget-style failures map to exit code 2 in the CLI.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::TooLarge { .. } | Error::StateCapExceeded { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
