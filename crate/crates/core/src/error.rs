use thiserror::Error;

use crate::bell::SubsetIndex;
use crate::concrete_logic::LogicDefect;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state space must contain at least one state")]
    EmptyStateSpace,
    #[error("duplicate state label `{0}`")]
    DuplicateState(String),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("event has {got} values but the state space has {expected} states")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value {value} at state `{state}` lies outside [0, 1]")]
    ValueOutOfRange { state: String, value: f64 },
    #[error("events are defined over different state spaces")]
    SpaceMismatch,
    #[error("not orthogonal")]
    NotOrthogonal,
    #[error("not comparable: subtrahend is not below minuend")]
    NotComparable,
    #[error("pointwise minimum of an empty sequence")]
    EmptyMinimum,
    #[error("event family must contain at least one event")]
    EmptyFamily,
    #[error("events #{first} and #{second} coincide within tolerance")]
    DuplicateEvent { first: usize, second: usize },
    #[error("not two-valued: event #{0} takes a value other than 0 or 1")]
    NotTwoValued(usize),
    #[error("improper event: member #{0} is comparable to its complement")]
    ImproperEvent(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("subset bits {bits:#b} out of range for n = {n}")]
    SubsetOutOfRange { bits: u32, n: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("n = {n} is not supported here (allowed: {allowed})")]
    UnsupportedN { n: usize, allowed: &'static str },
    #[error("set function has {got} values, expected {expected} for n = {n}")]
    SetFunctionLength {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("set function is over n = {function} but the correlation table is over n = {table}")]
    ArityMismatch { function: usize, table: usize },
    #[error("nested subsets {0} and {1}")]
    NestedSubsets(SubsetIndex, SubsetIndex),
    #[error("missing correlations for {}", format_subsets(.0))]
    MissingCorrelations(Vec<SubsetIndex>),
    #[error("correlation {larger} exceeds {smaller} at state `{state}` although {smaller} is a subset of {larger}")]
    NonMonotone {
        larger: SubsetIndex,
        smaller: SubsetIndex,
        state: String,
    },
    #[error("correlation table violates a Bell-like inequality; no witnesses exist")]
    ViolatedTable,
    #[error("enumeration for n = {0} exceeds the default cap of 4; pass the override to proceed")]
    EnumerationCap(usize),
    #[error("family member #{0} is not an element of the logic")]
    NotInLogic(usize),
    #[error("not a concrete logic: {0}")]
    InvalidLogic(LogicDefect),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("invalid fixture: {0}")]
    Fixture(String),
}

fn format_subsets(subsets: &[SubsetIndex]) -> String {
    subsets
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
