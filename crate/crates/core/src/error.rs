use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {z} lies outside the open unit disk")]
    OutsideDisk { z: Complex64 },

    #[error("degenerate derivative |h'| = {modulus:e} at {z}")]
    Degenerate { z: Complex64, modulus: f64 },

    #[error("map is not sense-preserving at {z}: {detail}")]
    SenseViolation { z: Complex64, detail: String },

    #[error("reciprocal of a series with zero constant term")]
    DivisionByZero,

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("invalid affine map: |a| = {a_mod} must exceed |b| = {b_mod}")]
    InvalidAffine { a_mod: f64, b_mod: f64 },

    #[error("parameter out of range: {0}")]
    ParameterDomain(String),

    #[error("no closed-form pre-Schwarzian known for family {0}")]
    UnsupportedFamily(String),

    #[error("exact norm unknown for family {0}")]
    UnknownNorm(String),

    #[error("quantity is not finite at {z}: {value}")]
    NonFinite { z: Complex64, value: f64 },

    #[error("region {0} is not contained in the unit disk")]
    RegionOutsideDisk(String),

    #[error("function is not a self-map of the disk: |phi({z})| = {modulus}")]
    NotSelfMap { z: Complex64, modulus: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

/// Non-fatal condition reported alongside a result.
///
/// Library routines never drop warnings; callers collect them into report
/// documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub source: String,
    pub message: String,
}

impl Warning {
    pub fn new(source: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.source, self.message)
    }
}
