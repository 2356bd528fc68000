use thiserror::Error;

/// Error type shared by the whole kernel.
///
/// Variants split into three families, which the CLI maps to exit codes:
/// input/validation errors (exit 1), exhausted budgets or inconclusive
/// certificates (exit 2), and internal assertion failures (exit 3).
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },

    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),

    #[error("coefficient denominator is divisible by the characteristic {p}")]
    NonInvertibleCoefficient { p: u64 },

    #[error("invalid ring spec: {0}")]
    RingSpec(String),

    #[error("operands belong to different rings")]
    RingMismatch,

    #[error("polynomial is not a unit of the local ring (zero constant term)")]
    NotAUnit,

    #[error("variable index {index} out of range for a ring in {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("polynomial does not lie in the square of the maximal ideal")]
    NotInMSquared,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("polynomial division left a nonzero remainder")]
    ExactDivisionFailed,

    #[error("the parameter s must be a positive rational")]
    NonPositiveS,

    #[error("band-function shape assertion failed at t = {t}")]
    FmaxViolation { t: String },

    #[error("field extension degree {0} not supported (1, 2 and 3 are)")]
    UnsupportedExtensionDegree(u32),

    #[error("reduction budget of {budget} steps exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("truncation inconclusive at N_max = {n_max} (last colength {last})")]
    Inconclusive { n_max: u32, last: u64 },

    #[error("Hilbert-Samuel difference window not reached within k <= {k_max}")]
    WindowNotReached { k_max: u32 },

    #[error("no power f^e with e <= {cap} found in the Jacobian ideal")]
    NotFoundWithinCap { cap: u32 },

    #[error("operation requires positive characteristic")]
    CharZero,

    #[error("deformation coefficient names a monomial outside the allowed set: {0}")]
    InvalidDeformationMonomial(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. }
            | Error::Inconclusive { .. }
            | Error::WindowNotReached { .. } => 2,
            Error::Internal(_) | Error::FmaxViolation { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
