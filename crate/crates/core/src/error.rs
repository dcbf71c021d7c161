use alloc::string::String;

/// Errors raised by the symbolic and numeric layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by zero in the coefficient field")]
    DivisionByZero,

    #[error("conductor must be positive")]
    InvalidConductor,

    #[error("elements of Q(zeta_{left}) and Q(zeta_{right}) cannot be combined")]
    FieldMismatch { left: u32, right: u32 },

    #[error("expected {expected} variables, found {found}")]
    VariableMismatch { expected: usize, found: usize },

    #[error("coefficient parse error at column {column}: {message} (`{token}`)")]
    CoefficientParse {
        column: usize,
        token: String,
        message: &'static str,
    },

    #[error("evaluation point has a non-finite coordinate")]
    NonFinitePoint,

    #[error("a projective map needs at least one component")]
    EmptyMap,

    #[error("all components are identically zero")]
    ZeroMap,

    #[error("components share a common factor (detected on test line {line})")]
    NotReduced { line: usize },

    #[error("derivative letter {letter} outside the alphabet 1..={nvars}")]
    InvalidWordLetter { letter: usize, nvars: usize },

    #[error("invalid operator family: {0}")]
    InvalidFamily(String),

    #[error("family has {found} operators but {expected} functions were given")]
    FamilySizeMismatch { expected: usize, found: usize },

    #[error("full-set enumeration exceeded its budget of {budget} families")]
    EnumerationBudget { budget: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("components are linearly dependent")]
    LinearlyDegenerate,

    #[error("{rejected} of {total} quadrature samples hit a singularity")]
    Singularity { rejected: usize, total: usize },

    #[error("invalid radius grid: {0}")]
    InvalidRadii(&'static str),

    #[error("quadrature configuration: {0}")]
    InvalidQuadrature(&'static str),

    #[error("the map lies in the divisor (pullback is identically zero)")]
    Containment,

    #[error("defining polynomial must be nonzero and homogeneous of positive degree")]
    NotHomogeneous,

    #[error("root isolation failed for a squarefree factor of degree {degree}")]
    RootIsolation { degree: usize },

    #[error("operation requires a one-variable domain, map has p = {p}")]
    RequiresOneVariable { p: usize },

    #[error("need at least {needed} hyperplanes, got {found}")]
    TooFewHyperplanes { needed: usize, found: usize },

    #[error("hyperplanes are not in general position")]
    GeneralPosition,

    #[error("divisor must be a hyperplane (degree 1)")]
    NotHyperplane,

    #[error("order function vanishes; defect undefined")]
    DegenerateOrder,

    #[error("supplied ramification {supplied} for divisor {index} exceeds observed {observed}")]
    RamificationMismatch {
        index: usize,
        supplied: String,
        observed: String,
    },

    #[error("power sum is not a nonzero constant, so the map does not omit the Fermat hypersurface")]
    NonConstantPowerSum,

    #[error("-c has no {degree}-th root among rational multiples of roots of unity in the field")]
    NoRoot { degree: u32 },

    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Stable kebab-case identifier for reports and expectations.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division-by-zero",
            Error::InvalidConductor => "invalid-conductor",
            Error::FieldMismatch { .. } => "field-mismatch",
            Error::VariableMismatch { .. } => "variable-mismatch",
            Error::CoefficientParse { .. } => "coefficient-parse",
            Error::NonFinitePoint => "non-finite-point",
            Error::EmptyMap => "empty-map",
            Error::ZeroMap => "zero-map",
            Error::NotReduced { .. } => "not-reduced",
            Error::InvalidWordLetter { .. } => "invalid-word-letter",
            Error::InvalidFamily(_) => "invalid-family",
            Error::FamilySizeMismatch { .. } => "family-size-mismatch",
            Error::EnumerationBudget { .. } => "enumeration-budget",
            Error::Inconsistency(_) => "inconsistency",
            Error::TheoremViolation(_) => "theorem-violation",
            Error::LinearlyDegenerate => "linearly-degenerate",
            Error::Singularity { .. } => "singularity",
            Error::InvalidRadii(_) => "invalid-radii",
            Error::InvalidQuadrature(_) => "invalid-quadrature",
            Error::Containment => "containment",
            Error::NotHomogeneous => "not-homogeneous",
            Error::RootIsolation { .. } => "root-isolation",
            Error::RequiresOneVariable { .. } => "requires-one-variable",
            Error::TooFewHyperplanes { .. } => "too-few-hyperplanes",
            Error::GeneralPosition => "general-position",
            Error::NotHyperplane => "not-hyperplane",
            Error::DegenerateOrder => "degenerate-order",
            Error::RamificationMismatch { .. } => "ramification-mismatch",
            Error::NonConstantPowerSum => "non-constant-power-sum",
            Error::NoRoot { .. } => "no-root",
            Error::Dimension(_) => "dimension",
        }
    }
}
