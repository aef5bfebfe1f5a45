use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree {0}: the degree must be positive")]
    InvalidDegree(usize),

    #[error("invalid genus {genus}: {reason}")]
    InvalidGenus { genus: usize, reason: &'static str },

    #[error("degree mismatch: expected a permutation of {expected} points, got {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),

    #[error("search space of {projected} steps exceeds the budget of {budget}")]
    BudgetExceeded { projected: u128, budget: u128 },

    #[error("valence profile ({three_valent} trivalent, {two_valent} bivalent) has odd degree sum")]
    OddDegreeSum {
        three_valent: usize,
        two_valent: usize,
    },

    #[error("empty valence profile")]
    EmptyProfile,

    #[error("graph is not connected")]
    Disconnected,

    #[error("multidegree must have positive total")]
    ZeroMultidegree,

    #[error("multidegree has {found} entries but the graph has {expected} edges")]
    MultidegreeLength { expected: usize, found: usize },

    #[error("expected a rational value, found irrational part {0}")]
    NonRational(String),

    #[error("vertex ordering is not a permutation of the {0} vertices")]
    InvalidOrdering(usize),

    #[error("cover has {edges} edges, above the explicit lift cap of {cap}")]
    LiftCapExceeded { edges: usize, cap: usize },

    #[error("state of energy {energy} exceeds the cap {cap}")]
    EnergyCap { energy: usize, cap: usize },

    #[error("nonzero z^{power} coefficient violates the parity constraint at genus {genus}")]
    ParityViolation { power: usize, genus: usize },

    #[error("edge {0} is a loop; propagators need two distinct endpoints")]
    LoopEdge(usize),

    #[error("no normalization reading matches the anchor set")]
    CalibrationFailed,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
