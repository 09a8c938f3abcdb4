use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not finite-dimensional: {0}")]
    NotFiniteDimensional(String),
    #[error("unsupported relation type: {0}")]
    UnsupportedRelation(String),
    #[error("increase field prime: trace-form radical needs p > {needed}, got p = {p}")]
    PrimeTooSmall { needed: usize, p: u64 },
    #[error("d^2 != 0 at degree {degree}")]
    SquareNonzero { degree: i64 },
    #[error("tau undefined at projective-injective")]
    TauAtProjectiveInjective,
    #[error("tau candidate rejected for vertex {0}")]
    TauCandidateRejected(String),
    #[error("violates density: input is decomposable or invalid")]
    UnrollFailed,
    #[error("not finite type within caps: {0}")]
    CapExceeded(String),
    #[error("strong global dimension not certified <= {0}")]
    SgldimNotCertified(usize),
    #[error("no valid section within window; advise larger n")]
    NoSection,
    #[error("theorem check failed: {0}")]
    TheoremCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
