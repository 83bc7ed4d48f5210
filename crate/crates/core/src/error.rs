use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: input validation (bad shapes, violated
/// preconditions) and mathematical inconsistency (data that does not have the
/// structure it claims). [`Error::is_inconsistency`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("cutoffs differ: ({0}, {1}) vs ({2}, {3})")]
    CutoffMismatch(u32, u32, u32, u32),

    #[error("exponential of a polynomial with nonzero constant term")]
    NonzeroConstant,

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("d0 - d is not an integer (2*d0 = {twice_d0}, deg(z) = {deg2z})")]
    Parity { twice_d0: i64, deg2z: i64 },

    #[error("operation requires a series of strong simple type shape")]
    NotSimpleType,

    #[error("exponent {0} is not an integer (non-characteristic data)")]
    NonIntegralExponent(String),

    #[error("class {0:?} is not a basic class")]
    NotBasicClass(Vec<i64>),

    #[error("cannot isolate class {0:?}: {1}")]
    Isolation(Vec<i64>, String),

    #[error("series violates a declared invariant: {0}")]
    InvariantViolation(String),

    #[error("insufficient cutoff: {0}")]
    InsufficientCutoff(String),

    #[error("system inconsistent at coefficient index {index}")]
    Inconsistent { index: usize },

    #[error("frequency outside admissible grid: {0}")]
    FrequencyOutsideGrid(String),

    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),

    #[error("reconstruction residual is nonzero at {count} coefficient(s), first at {first}")]
    Residual { count: usize, first: String },
}

impl Error {
    /// True for failures that signal data lacking the claimed mathematical
    /// structure, as opposed to malformed input.
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            Error::InvariantViolation(_)
                | Error::Inconsistent { .. }
                | Error::FrequencyOutsideGrid(_)
                | Error::Residual { .. }
                | Error::NonIntegralExponent(_)
                | Error::Isolation(..)
        )
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::VariableMismatch { .. } => "variable_mismatch",
            Error::CutoffMismatch(..) => "cutoff_mismatch",
            Error::NonzeroConstant => "nonzero_constant",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::InvalidInput(_) => "invalid_input",
            Error::Parity { .. } => "parity",
            Error::NotSimpleType => "not_simple_type",
            Error::NonIntegralExponent(_) => "non_integral_exponent",
            Error::NotBasicClass(_) => "not_basic_class",
            Error::Isolation(..) => "isolation",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::InsufficientCutoff(_) => "insufficient_cutoff",
            Error::Inconsistent { .. } => "inconsistent",
            Error::FrequencyOutsideGrid(_) => "frequency_outside_grid",
            Error::InsufficientDepth(_) => "insufficient_depth",
            Error::Residual { .. } => "residual",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
