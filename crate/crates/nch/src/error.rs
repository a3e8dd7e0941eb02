//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NchError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("singular matrix: no inverse over the algebra")]
    Singular,

    #[error("spanning set is not a two-sided ideal (closure grows the span)")]
    NonIdeal,

    #[error("bimodule axioms violated: {0}")]
    BimoduleAxiom(String),

    #[error("truncation overflow: degree-raising operator at top degree {0}")]
    TruncationOverflow(usize),

    #[error("operator {op} is not available for the {convention} convention")]
    ConventionMismatch { op: String, convention: String },

    #[error("resource cap exceeded: ambient dimension {dim} > cap {cap} (set NCH_MAX_DIM to raise)")]
    ResourceCap { dim: usize, cap: usize },

    #[error("map is not a derivation: fails Leibniz on basis pair ({0}, {1})")]
    NotDerivation(usize, usize),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("based map required: rho(1) != 1")]
    NotBased,

    #[error("lift condition violated: {0}")]
    LiftCondition(String),

    #[error("parity mismatch between higher trace and K-class")]
    ParityMismatch,

    #[error("level n={n} is below the higher-trace power m={m}")]
    LevelBelowPower { n: usize, m: usize },

    #[error("symbol has a root on (or too close to) the unit circle")]
    RootOnCircle,

    #[error("cannot split symbol denominator over the rationals into inside/outside factors")]
    UnsplittableSymbol,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, NchError>;

/// Global ambient-dimension guard, configurable via `NCH_MAX_DIM`.
pub fn check_dim_cap(dim: usize) -> Result<()> {
    let cap = std::env::var("NCH_MAX_DIM")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(20_000);
    if dim > cap {
        Err(NchError::ResourceCap { dim, cap })
    } else {
        Ok(())
    }
}
