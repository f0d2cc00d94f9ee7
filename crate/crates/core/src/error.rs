use thiserror::Error;

use crate::term::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("scope violation: {0}")]
    Scope(String),

    #[error("unknown operation `{0}`")]
    UnknownOp(Name),

    #[error("unknown rule `{0}`")]
    UnknownRule(Name),

    #[error("metavariable `{0}` is not bound")]
    UnboundMeta(Name),

    #[error("metavariable `{0}` is declared onehole but its instance does not use the fresh variable")]
    OneHole(Name),

    #[error("template cannot be used as a pattern: {0}")]
    NotAPattern(String),

    #[error("traces are not composable: {0}")]
    Composability(String),

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("no rule of `{target}` realizes {what}")]
    NoRealization { target: Name, what: String },

    #[error("invalid signature: {0}")]
    Invalid(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),

    #[error("unknown translation `{0}`")]
    UnknownTranslation(String),

    #[error("{0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
