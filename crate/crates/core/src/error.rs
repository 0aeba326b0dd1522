use thiserror::Error;

/// Every failure the library can report. `code()` gives the stable
/// machine-readable name used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate triple: the three points must be pairwise distinct")]
    DegenerateTriple,
    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("too few elements: need at least {needed}, got {got}")]
    TooFewElements { needed: usize, got: usize },
    #[error("apex is not a member of the point set")]
    ApexNotInSet,
    #[error("vertical slope encountered with vertical handling disabled")]
    VerticalSlopeUnsupported,
    #[error("the base point lies in the target set")]
    PointInQ,
    #[error("empty input")]
    EmptyInput,
    #[error("point sets are not disjoint")]
    NonDisjoint,
    #[error("could not certify the result within {max_bits} bits")]
    PrecisionExhausted { max_bits: u32 },
    #[error("set kinds do not match: {0}")]
    KindMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("spacing condition violated: minimum gap {gap} is below the largest shift gap {required}")]
    SpacingViolation { gap: String, required: String },
    #[error("shifts must be strictly increasing")]
    BadShifts,
    #[error("base set is empty")]
    EmptyBase,
    #[error("angle overflow at step {step}: choose a smaller t")]
    AngleOverflow { step: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("staged convolution needs {needed} candidate elements, budget is {budget}")]
    PipelineInfeasible { needed: u128, budget: u64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("duplicate point ({0}, {1})")]
    DuplicatePoint(String, String),
    #[error("bad rational literal {0:?}")]
    BadRational(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateTriple => "DegenerateTriple",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::TooFewElements { .. } => "TooFewElements",
            Error::ApexNotInSet => "ApexNotInSet",
            Error::VerticalSlopeUnsupported => "VerticalSlopeUnsupported",
            Error::PointInQ => "PointInQ",
            Error::EmptyInput => "EmptyInput",
            Error::NonDisjoint => "NonDisjoint",
            Error::PrecisionExhausted { .. } => "PrecisionExhausted",
            Error::KindMismatch(_) => "KindMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::SpacingViolation { .. } => "SpacingViolation",
            Error::BadShifts => "BadShifts",
            Error::EmptyBase => "EmptyBase",
            Error::AngleOverflow { .. } => "AngleOverflow",
            Error::BadParams(_) => "BadParams",
            Error::PipelineInfeasible { .. } => "PipelineInfeasible",
            Error::DegenerateFit(_) => "DegenerateFit",
            Error::SchemaError(_) => "SchemaError",
            Error::DuplicatePoint(..) => "DuplicatePoint",
            Error::BadRational(_) => "BadRational",
            Error::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
