use thiserror::Error;

/// Errors raised by the exact reparametrization engine.
///
/// Every variant carries a human-readable description of the violated
/// invariant; the CLI prints it verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length must be strictly positive, got {0}")]
    NonPositiveLength(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("domain error: {t} is outside [0, {dom}]")]
    Domain { t: String, dom: String },

    #[error("composition error: codomain {cod} of the first map does not match domain {dom} of the second")]
    Composition { cod: String, dom: String },

    #[error("split error: {0}")]
    Split(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("action error: {0}")]
    Action(String),

    #[error("morphism error: {0}")]
    Morphism(String),

    #[error("unsupported transpose: {0}")]
    UnsupportedTranspose(String),

    #[error("representative error: {0}")]
    Representative(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("collapse error: {0}")]
    Collapse(String),

    #[error("braid error: {0}")]
    Braid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
