use thiserror::Error;

use crate::tensor_system::ValidationReport;

#[derive(Error, Debug)]
pub enum Error {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("multiplicity N[{a},{b}->{c}] = {value} is not 0 or 1")]
    Multiplicity { a: String, b: String, c: String, value: i64 },
    #[error("ordering error: {0}")]
    NotValidated(String),
    #[error("validation failed: {0}")]
    Validation(Box<ValidationReport>),
    #[error("gauge has no constant for vertex ({a},{b}->{c})")]
    IncompleteGauge { a: String, b: String, c: String },
    #[error("gauge constant for vertex ({a},{b}->{c}) is zero")]
    ZeroGauge { a: String, b: String, c: String },
    #[error("F block ({a},{b},{c};{d}) is singular (smallest singular value {smallest_singular_value:e})")]
    SingularBlock { a: String, b: String, c: String, d: String, smallest_singular_value: f64 },
    #[error("site index {index} out of range {lo}..={hi}")]
    SiteOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("operators are defined on different bases")]
    BasisMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing braiding data: {0}")]
    MissingBraiding(String),
    #[error("not one-dimensional: {0}")]
    NotOneDimensional(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown catalog key `{given}`; valid keys: {valid}")]
    UnknownCatalogKey { given: String, valid: String },
    #[error("invalid catalog parameter: {0}")]
    CatalogParam(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
