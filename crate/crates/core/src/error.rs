use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A scalar argument is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// Two vectors (or a vector and the game) disagree on the number of options.
    DimensionMismatch { expected: usize, found: usize },
    /// A plan does not cover exactly the game horizon.
    PlanLength { expected: usize, found: usize },
    /// Weights or penalties do not sum to one within tolerance.
    NotNormalized { what: &'static str, sum: f64 },
    /// The target weight cannot be reached from `from` in a single round.
    Unreachable { from: f64, to: f64 },
    /// The operation is only defined for some game shapes (usually `N = 2`).
    Unsupported(&'static str),
    /// An objective returned NaN or an infinity.
    NonFinite { at: f64 },
    /// The oracle refuses games whose enumeration would be too large.
    TooExpensive { rounds: usize, evaluations: f64 },
    /// A lemma or formula was called outside the hypotheses it is stated for.
    Precondition(&'static str),
    /// A split of penalties does not add up to the required total.
    InfeasibleSplit { required: f64, found: f64 },
    /// Two routes that must agree did not.
    Inconsistent(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                expected,
            } => write!(f, "invalid {name} = {value}: expected {expected}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected} options, found {found}")
            }
            Error::PlanLength { expected, found } => {
                write!(f, "plan has {found} rounds but the game has {expected}")
            }
            Error::NotNormalized { what, sum } => write!(f, "{what} sum to {sum}, not 1"),
            Error::Unreachable { from, to } => {
                write!(f, "weight {to} is not reachable from {from} in one round")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NonFinite { at } => write!(f, "objective is not finite at {at}"),
            Error::TooExpensive { rounds, evaluations } => write!(
                f,
                "refusing to enumerate {rounds} rounds (about {evaluations:.3e} sequences)"
            ),
            Error::Precondition(what) => write!(f, "precondition violated: {what}"),
            Error::InfeasibleSplit { required, found } => {
                write!(f, "split sums to {found}, required {required}")
            }
            Error::Inconsistent(what) => write!(f, "internal inconsistency: {what}"),
        }
    }
}

impl core::error::Error for Error {}
