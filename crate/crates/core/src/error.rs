use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} exceeds the configured cap ({actual} > {limit})")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("bad permutation: {0}")]
    BadPermutation(String),
    #[error("subgroup belongs to a different ambient group")]
    ForeignSubgroup,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("map is not a morphism of the fusion system")]
    NotAFusionMorphism,
    #[error("search exhausted without a factorization")]
    SearchExhausted,
    #[error("criteria disagree: {0}")]
    CriteriaDisagree(String),
}

/// Errors from the group expression grammar. Positions are 0-based character
/// offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("{name} expects {expected} argument(s), got {got} (position {pos})")]
    Arity {
        name: String,
        expected: &'static str,
        got: usize,
        pos: usize,
    },
    #[error("{0}")]
    Domain(String),
}
