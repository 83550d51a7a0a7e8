use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("non-finite value {value} at x = {x}, eps = {eps}")]
    NonFinite { x: f64, eps: f64, value: f64 },

    #[error("derivative of order {requested} requested, at most {available} available")]
    DerivativeOrder { requested: usize, available: usize },

    #[error("invalid mollifier: {0}")]
    InvalidMollifier(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error(
        "subdivision budget of {budget} intervals exhausted: best estimate {value} with error {error}"
    )]
    BudgetExhausted { budget: usize, value: f64, error: f64 },

    #[error("interval [{a}, {b}] cannot be subdivided further: best estimate {value} with error {error}")]
    RoundoffLimited { a: f64, b: f64, value: f64, error: f64 },

    #[error("integral over an unbounded range diverges: {0}")]
    UnboundedIntegral(String),

    #[error("samples unfit for a power law: {0}")]
    Unfit(String),

    #[error("no limit: {0}")]
    NoLimit(String),

    #[error("{what} is not finite at eps = {eps}: {value}")]
    NonFiniteCoupling { what: &'static str, eps: f64, value: f64 },

    #[error("eigensolver failed to converge (dimension {0})")]
    Eigensolver(usize),

    #[error("probability {0} lies outside [0, 1] beyond rounding slack")]
    ProbabilityOutOfRange(f64),

    #[error("dyson series produced a non-finite amplitude at order {order}")]
    DysonNonFinite { order: usize },
}
