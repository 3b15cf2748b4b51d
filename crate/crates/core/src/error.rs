use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("not a metric: {0}")]
    NotAMetric(String),

    #[error("space has a single point")]
    SingletonSpace,

    #[error("space is empty")]
    EmptySpace,

    #[error("no 2-covering of diameter {level} exists (covering diameter is {nabla})")]
    NoCoverExists { level: f64, nabla: f64 },

    #[error("space has focal points; its finite dimensions are infinite")]
    InfiniteDimension,

    #[error("exact solver limit exceeded: {size} points (limit {limit})")]
    ExactLimitExceeded { size: usize, limit: usize },

    #[error("brute-force oracle limited to {limit} points, got {size}")]
    OracleTooLarge { size: usize, limit: usize },

    #[error("malformed cover: {0}")]
    MalformedCover(String),

    #[error("cover equation has no unique solution (cover is not in K1)")]
    NoUniqueSolution,

    #[error("locally uniform fast path does not apply: {0}")]
    FastPathInapplicable(String),

    #[error("mass distribution hypothesis fails on set {members:?}: mass {mass} > {bound}")]
    HypothesisViolated { members: Vec<usize>, mass: f64, bound: f64 },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("lattice approximation too fine: {cubes} cubes exceeds cap {cap}")]
    TooFine { cubes: u64, cap: u64 },

    #[error("lattice approximation is empty")]
    EmptyApproximation,
}

impl Error {
    /// Errors caused by solver or budget limits rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::ExactLimitExceeded { .. } | Error::OracleTooLarge { .. } | Error::TooFine { .. })
    }
}
