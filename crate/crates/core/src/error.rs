use thiserror::Error;

/// Errors raised by evaluation, integration and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The phase of ζ changed by half a turn or more between two samples, so
    /// the unwrapped argument can no longer be trusted.
    #[error("phase branch lost between t = {from} and t = {to} (|ΔS| = {step})")]
    BranchLoss { from: f64, to: f64, step: f64 },

    #[error("evaluation budget of {budget} exhausted while {context}")]
    Budget { budget: usize, context: String },

    #[error("interval [{a}, {b}] leaves the covered range [{lo}, {hi}]")]
    Coverage { a: f64, b: f64, lo: f64, hi: f64 },

    #[error("no sign change in search window [{lo}, {hi}] while {context}")]
    Bracket { lo: f64, hi: f64, context: String },

    #[error("iteration {step} of {depth} fell to {value}, below the floor {floor}")]
    IterationDepth {
        step: usize,
        depth: usize,
        value: f64,
        floor: f64,
    },

    #[error("index constraint violated: {0}")]
    Index(String),

    #[error("tau = {tau} is not admissible for x = {x} (threshold {threshold})")]
    Admissibility { x: f64, tau: f64, threshold: f64 },

    #[error("endpoint {t} exceeds the cap {cap}; largest feasible tau is {max_tau}")]
    RangeCap { t: f64, cap: f64, max_tau: f64 },

    #[error("ladder consistency: {0}")]
    Consistency(String),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("sample cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }

    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }
}
