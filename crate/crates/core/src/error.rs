use thiserror::Error;

use crate::scenario::Side;

/// Problems with a scenario description.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("{0} box has no inputs")]
    NoInputs(Side),
    #[error("{side} input {input} has {count} outcome(s); at least 2 are required")]
    TooFewOutcomes { side: Side, input: usize, count: usize },
    #[error("{side} input {input} repeats outcome label {label:?}")]
    DuplicateLabel { side: Side, input: usize, label: String },
    #[error("sample space has more than {cap} points")]
    GammaTooLarge { cap: usize },
    #[error("atom ({a}, {alpha}, {b}, {beta}) is out of range")]
    AtomOutOfRange {
        a: usize,
        alpha: usize,
        b: usize,
        beta: usize,
    },
    #[error("{side} input {input} does not exist")]
    InputOutOfRange { side: Side, input: usize },
    #[error("outcome {outcome} is out of range for {side} input {input}")]
    OutcomeOutOfRange { side: Side, input: usize, outcome: usize },
    #[error("localized element needs a non-empty outcome set")]
    EmptyOutcomeSet,
    #[error("sample point {point} is outside the sample space of {size} points")]
    PointOutOfRange { point: usize, size: usize },
}

/// Problems decoding one of the text formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("hex element has {found} digits, expected {expected}")]
    HexWidth { expected: usize, found: usize },
    #[error("invalid hex digit {0:?}")]
    HexDigit(char),
    #[error("hex element sets bits beyond the sample space width {width}")]
    HexOverflow { width: usize },
    #[error("invalid rational {0:?}")]
    Rational(String),
    #[error("invalid input-pair key {0:?}; expected \"a,b\"")]
    PairKey(String),
    #[error("{0}")]
    Shape(String),
}

/// Problems building or querying a logic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("closure exceeded the budget of {cap} elements")]
    ClosureBudgetExceeded { cap: usize },
    #[error("set {0} is not an element of the logic")]
    ForeignElement(String),
    #[error("element {0} is not an atom")]
    NotAnAtom(usize),
    #[error("atom {atom} is not below element {element}")]
    NotAbove { atom: usize, element: usize },
    #[error("no case of the order classification applies to atom {atom} below {element}")]
    UnclassifiedOrder { atom: usize, element: usize },
    #[error("even-set fixture supports 1 <= k <= {cap}, got {k}")]
    EvenSetCap { k: usize, cap: usize },
    #[error("element sets have {found} points but the logic has {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("compatibility check is bounded to {cap} elements, got {found}")]
    CompatibleSetTooLarge { cap: usize, found: usize },
}

/// Problems with probability tables and states.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("probability table is missing input pair ({a}, {b})")]
    MissingPair { a: usize, b: usize },
    #[error("probability table for input pair ({a}, {b}) has the wrong shape")]
    PairShape { a: usize, b: usize },
    #[error("state value table has {found} entries, logic has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("state is not additive: {0}")]
    NotAdditive(String),
    #[error("state value {value} of element {element} is outside [0, 1]")]
    OutOfRange { element: usize, value: String },
    #[error("decompositions of element {element} give different values {first} and {second}")]
    WellDefinedness {
        element: usize,
        first: String,
        second: String,
    },
    #[error("polytope has {found} variables, cap is {cap}")]
    TooManyVariables { cap: usize, found: usize },
    #[error("probability table is not a valid non-signalling state: {0}")]
    Invalid(String),
}

/// Problems with an observable.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObservableError {
    #[error("observable has no outcomes")]
    Empty,
    #[error("value {0} is assigned twice")]
    DuplicateValue(String),
    #[error("elements {0} and {1} overlap")]
    OverlappingSupports(usize, usize),
    #[error("elements do not cover the whole sample space")]
    IncompleteCover,
    #[error("join of a value subset is not in the logic: {0}")]
    SubJoinNotInLogic(String),
    #[error("element index {0} is out of range")]
    UnknownElement(usize),
    #[error("observable has {found} outcomes, cap is {cap}")]
    TooManyOutcomes { cap: usize, found: usize },
}

/// How a failure should be reported to a caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input was malformed or inconsistent.
    Invalid,
    /// A configured resource cap was hit.
    Cap,
    /// A structural claim failed on valid input.
    Violation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Scenario(ScenarioError::GammaTooLarge { .. })
            | Error::Logic(LogicError::ClosureBudgetExceeded { .. })
            | Error::Logic(LogicError::EvenSetCap { .. })
            | Error::Logic(LogicError::CompatibleSetTooLarge { .. })
            | Error::State(StateError::TooManyVariables { .. })
            | Error::Observable(ObservableError::TooManyOutcomes { .. }) => ErrorClass::Cap,
            Error::Logic(LogicError::UnclassifiedOrder { .. }) | Error::State(StateError::WellDefinedness { .. }) => {
                ErrorClass::Violation
            }
            _ => ErrorClass::Invalid,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
