use thiserror::Error;

/// Errors surfaced by key generation, encryption, evaluation and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("overflow risk: plaintext bound {bound} exceeds capacity {capacity}")]
    OverflowRisk { bound: String, capacity: String },

    #[error("capacity violation at {node}: bound {bound} exceeds {capacity}")]
    CapacityViolation {
        node: String,
        bound: String,
        capacity: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("key generation failed after {0} attempts (parameter primes likely too small)")]
    KeygenExhausted(u32),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),

    #[error("attack budget exhausted after {0} operations")]
    BudgetExhausted(u64),

    #[error("insufficient samples: need {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("compiled circuit already evaluated; re-running leaks the wire encodings (pass allow_reuse to override)")]
    CircuitReuse,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse error category, used by the CLI for exit codes and machine-readable output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Capacity,
    OverflowRisk,
    VerificationMismatch,
    AttackBudget,
    Other,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse(_) => ErrorCategory::Parse,
            Error::CapacityViolation { .. } => ErrorCategory::Capacity,
            Error::OverflowRisk { .. } => ErrorCategory::OverflowRisk,
            Error::VerificationMismatch(_) => ErrorCategory::VerificationMismatch,
            Error::BudgetExhausted(_) => ErrorCategory::AttackBudget,
            _ => ErrorCategory::Other,
        }
    }
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Parse => "parse",
            ErrorCategory::Capacity => "capacity",
            ErrorCategory::OverflowRisk => "overflow-risk",
            ErrorCategory::VerificationMismatch => "verification-mismatch",
            ErrorCategory::AttackBudget => "attack-budget",
            ErrorCategory::Other => "other",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
