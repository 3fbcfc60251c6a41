use thiserror::Error;

/// Errors raised by every operation in the crate.
///
/// Each variant maps to a module-qualified code (see [`Error::code`]) so that
/// front ends can report failures without matching on message text.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("matrix of size {size} exceeds the limit of {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("degree {degree} exceeds the guard of {limit}")]
    DegreeLimitExceeded { degree: u32, limit: u32 },

    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not zero below the anti-diagonal")]
    NotAntiTriangular,
    #[error("middle entry {0} is not a square in the scalar field")]
    MiddleEntryNotSquare(String),
    #[error("square root unavailable: {0}")]
    SquareRootUnavailable(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("directional kernel is empty")]
    EmptyKernel,
    #[error("Hessian determinant is not zero")]
    NotZeroHessian,
    #[error("Hessian determinant is zero")]
    ZeroHessianDeterminant,
    #[error("requires a proper extension of the scalar field: {0}")]
    NeedsExtension(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("Hessian determinant is not constant")]
    NonConstantDeterminant,
    #[error("weight search exhausted its budget of {budget} steps")]
    BudgetExceeded { budget: usize },
    #[error("weight search stuck: {0}")]
    SearchStuck(String),
    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
    #[error("isotropy undecided up to height {0}")]
    IsotropyUndecided(u32),

    #[error("anti-diagonal entries are not nonzero constants")]
    NonConstantAntiDiagonal,

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            Syntax { .. } => "poly.syntax",
            UnknownVariable { .. } => "poly.unknown_variable",
            FieldMismatch(_) => "poly.field_mismatch",
            DimensionMismatch(_) => "poly.dimension_mismatch",
            IndexOutOfRange { .. } => "poly.index_out_of_range",
            ZeroPolynomial => "poly.zero_polynomial",
            SizeLimitExceeded { .. } => "calculus.size_limit",
            DegreeLimitExceeded { .. } => "gradmap.degree_limit",
            Singular => "linalg.singular",
            NotSymmetric => "linalg.not_symmetric",
            NotAntiTriangular => "linalg.not_anti_triangular",
            MiddleEntryNotSquare(_) => "linalg.middle_not_square",
            SquareRootUnavailable(_) => "linalg.sqrt_unavailable",
            RankDeficient(_) => "linalg.rank_deficient",
            InvalidArgument(_) => "weights.invalid_argument",
            PreconditionUnmet(_) => "precondition_unmet",
            EmptyKernel => "triangulate.empty_kernel",
            NotZeroHessian => "triangulate.not_zero_hessian",
            ZeroHessianDeterminant => "triangulate.zero_hessian_determinant",
            NeedsExtension(_) => "triangulate.needs_extension",
            UnsupportedDimension(_) => "triangulate.unsupported_dimension",
            NonConstantDeterminant => "triangulate.non_constant_determinant",
            BudgetExceeded { .. } => "triangulate.budget_exceeded",
            SearchStuck(_) => "triangulate.search_stuck",
            HypothesesUnmet(_) => "triangulate.hypotheses_unmet",
            IsotropyUndecided(_) => "triangulate.isotropy_undecided",
            NonConstantAntiDiagonal => "gradmap.non_constant_anti_diagonal",
            MalformedCertificate(_) => "quadform.malformed_certificate",
            Overflow(_) => "quadform.overflow",
            UnknownFixture(_) => "cli.unknown_fixture",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
