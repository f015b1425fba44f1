use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("unsupported weights: {0}")]
    UnsupportedWeights(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("point outside the domain of the Veronese map: {0}")]
    OutsideDomain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate construction failed at {node}")]
    CertificateFailure { node: String },
    #[error("malformed certificate at {path}: {reason}")]
    MalformedCertificate { path: String, reason: String },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
