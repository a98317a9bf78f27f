use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported root system type: {0}")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("group order {order} exceeds the configured cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },

    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("coefficient at weight {weight:?} lies outside the difference set; need degree >= {min_degree}")]
    SupportTooLarge { weight: Vec<i64>, min_degree: usize },

    #[error("coefficients are not conjugate symmetric at weight {0:?}")]
    NotConjugateSymmetric(Vec<i64>),

    #[error("weight set is not stable under the group")]
    WeightSetNotStable,

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("multiplicity of irrep {irrep} is not an integer ({value})")]
    NonIntegralMultiplicity { irrep: usize, value: f64 },

    #[error("irrep {irrep}: projection has rank {found}, expected {expected}")]
    RankDeficiency {
        irrep: usize,
        expected: usize,
        found: usize,
    },

    #[error("input is not invariant under the group (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("relaxation degree {degree} is below the matrix order {required}")]
    DegreeTooSmall { degree: usize, required: usize },

    #[error("symmetry adapted basis does not match the problem: {0}")]
    BasisMismatch(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("solver hit the iteration limit ({0})")]
    MaxIterations(usize),

    #[error("certificate is infeasible: smallest block eigenvalue {min_eigenvalue:.3e}")]
    InfeasibleCertificate { min_eigenvalue: f64 },

    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
