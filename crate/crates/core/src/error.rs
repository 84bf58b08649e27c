use alloc::string::String;

/// Errors raised by the library.
///
/// [`Error::RegimeNotCovered`] is distinguished from the others: it is a
/// principled refusal to compute something that is not determined by the
/// available theory, rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("valuation undefined at zero")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("prime factor exceeds the supported 64-bit range")]
    FactorOutOfRange,
    #[error("label must be nonzero (edge `{0}`)")]
    ZeroLabel(String),
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("unexpected graph shape: {0}")]
    GraphShape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix for generator `{0}` is not invertible")]
    NotInvertible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("module is not well defined: relator `{0}` does not act as the identity")]
    IllDefinedModule(String),
    #[error("modulus overflows 64 bits")]
    ModulusOverflow,
    #[error("regime not covered: {0}")]
    RegimeNotCovered(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
