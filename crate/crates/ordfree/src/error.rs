use thiserror::Error;

/// Library error type. Mathematical "negative results" (not free, not
/// principal, ...) are not errors; they are encoded in result enums. Errors
/// are precondition violations, unsupported inputs, and exhausted budgets.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("rank-deficient input: {0}")]
    RankDeficient(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is singular")]
    Singular,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("gram matrix is degenerate")]
    DegenerateGram,
    #[error("not an order: {0}")]
    NotAnOrder(String),
    #[error("zero ideal where a nonzero ideal is required")]
    ZeroIdeal,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("registry validation failed: {0}")]
    Registry(String),
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
