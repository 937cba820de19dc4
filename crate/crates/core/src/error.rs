use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The valuation list is unusable: empty, or a value is not finite.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// The profile has fewer agents than the operation needs.
    #[error("profile has {n} agent(s), operation needs at least {required}")]
    DegenerateProfile { n: usize, required: usize },

    /// A single-agent misreport that the analysis does not cover.
    #[error("invalid misreport: {0}")]
    InvalidMisreport(String),

    /// A coalition with members outside 1..=n, or an ill-formed query on one.
    #[error("invalid coalition: {0}")]
    InvalidCoalition(String),

    /// Enumeration over all coalitions was refused because n exceeds the cap.
    #[error("exhaustive oracle refused: n = {n} exceeds cap {cap}")]
    OracleTooLarge { n: usize, cap: usize },

    /// A size or index parameter outside the meaningful range for the query.
    #[error("invalid size: {0}")]
    InvalidSize(String),

    /// Size bounds are only stated for profiles with v_1 != v_n.
    #[error("size bounds do not apply: highest and lowest valuations coincide")]
    DegenerateBounds,

    /// A negative admission threshold for greedy coalition formation.
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
}

pub type Result<T> = std::result::Result<T, Error>;
