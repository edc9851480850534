use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse group input: {0}")]
    Parse(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("generators have mismatched degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {degree} exceeds the maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("group closure exceeds the order cap {0}")]
    OrderExceeded(usize),
    #[error("unknown group family {0:?}")]
    UnknownFamily(String),
    #[error("element index {0} out of range")]
    BadElement(usize),
    #[error("element subset is not a subgroup")]
    NotSubgroup,
    #[error("({a}, {b}) is not a witness: {why}")]
    NotAWitness { a: String, b: String, why: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("coefficient rings differ")]
    CoeffMismatch,
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("step {k} out of range for modulus {n}")]
    StepOutOfRange { n: usize, k: i64 },
    #[error("exponent m must be at least 1 (got {0})")]
    BadExponent(usize),
    #[error("modulus must be at least {min} (got {n})")]
    BadModulus { n: usize, min: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitError {
    #[error("k = {k} outside 1..={order}")]
    KOutOfRange { k: usize, order: usize },
    #[error("M = {m} outside 2..={order}")]
    MOutOfRange { m: usize, order: usize },
    #[error("closed-form identity failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no element {0:?} in the group")]
    UnknownSelector(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Unit(#[from] UnitError),
}
