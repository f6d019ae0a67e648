use thiserror::Error;

/// Errors raised by the algebra, jet, and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },

    #[error("exponent vector has length {got}, expected {expected}")]
    BadExponent { expected: usize, got: usize },

    #[error("reparametrization must satisfy phi(0) = 0 and phi'(0) != 0")]
    DegenerateReparam,

    #[error("inner series of a composition must vanish at 0")]
    NonzeroConstantTerm,

    #[error("series of order 0 cannot be differentiated")]
    OrderZero,

    #[error("germ order {have} is too small, need at least {need}")]
    InsufficientOrder { have: usize, need: usize },

    #[error("derivative order {requested} exceeds declared jet order {max}")]
    JetOrderExceeded { requested: usize, max: usize },

    #[error("jet variable z_{coord}^({deriv}) out of bounds for n = {n}, k = {k}")]
    JetVariableOutOfRange { coord: usize, deriv: usize, n: usize, k: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("perturbation does not vanish to order {needed} at the base point")]
    PerturbationOrder { needed: usize },

    #[error("local algebra did not stabilize by degree {cap}")]
    CapExceeded { cap: u32 },

    #[error("parametrized matrix is rank deficient")]
    RankDeficient,

    #[error("prime {p} divides a coefficient denominator")]
    BadPrime { p: u64 },

    #[error("enumeration of {points} points exceeds the budget of {budget}")]
    BudgetExceeded { points: u64, budget: u64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
