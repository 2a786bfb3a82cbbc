use crate::weights::BiWeight;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: p = {p}, q = {q}")]
    InvalidDimension { p: usize, q: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("chain is not weakly fair")]
    NotWeaklyFair,

    #[error("chain violates the repeated-entry condition")]
    HpViolated,

    #[error("weight {0} is not dominant for the compact roots")]
    NotDominant(BiWeight),

    #[error("infinitesimal character lies outside the fundamental box")]
    OutsideFundamentalBox,

    /// Two contributions of opposite sign landed on the same K̃-type.
    #[error("opposite signs accumulated on weight {0}")]
    SignConflict(BiWeight),

    #[error("witness {0} is not u-small")]
    NotUSmall(BiWeight),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
