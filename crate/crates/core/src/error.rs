//! Error types shared across the lab modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("exact integer capacity exceeded: {0}")]
    Overflow(String),
    #[error("index out of table range: {0}")]
    OutOfRange(String),
    #[error("cross-check disagreement: {0}")]
    CrossCheck(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("domain violation: {0}")]
    Domain(String),
}

#[derive(Debug, Error)]
pub enum DeltaError {
    #[error("argument {n} outside delta validity range |n| <= {range}")]
    OutsideRange { n: i64, range: i64 },
    #[error("imaginary residue {residue:e} exceeds 1e-9")]
    ImaginaryResidue { residue: f64 },
    #[error("invalid scheme parameter: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum SummationError {
    #[error("coefficient table (len {have}) does not cover the window up to {need}")]
    InsufficientTable { need: usize, have: usize },
    #[error("dual tail not decayed at cutoff: last term magnitude {achieved:e}")]
    TailNotDecayed { achieved: f64 },
    #[error("invalid case: {0}")]
    Invalid(String),
}

#[derive(Debug, Error)]
pub enum OscillatoryError {
    #[error("certificate precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Error)]
pub enum LfuncError {
    #[error("coefficient table (len {have}) too short, need {need}")]
    InsufficientTable { need: usize, have: usize },
    #[error("smoothing self-consistency gap {gap:e} exceeds 1e-3")]
    Instability { gap: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}
