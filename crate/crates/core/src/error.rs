use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input: invalid parameters, unparsable profile data, unknown names.
    Config,
    /// Numerical machinery refused to certify a result.
    Solver,
    /// Mathematically outside the domain of a formula.
    Domain,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coupling g = {g} is in the fall-to-center regime (requires g > -1)")]
    Collapse { g: f64 },

    #[error("{what} = {value} is out of range: {reason}")]
    Range {
        what: &'static str,
        value: f64,
        reason: String,
    },

    #[error("pole of the generating function at z = 1/rho = {at}")]
    Pole { at: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("unknown {family} '{name}' (available: {available})")]
    UnknownStrategy {
        family: &'static str,
        name: String,
        available: String,
    },

    #[error("omega({t}) = {omega} misses the asymptote {asymptote} (tolerance {tol:e})")]
    AsymptoteNotReached {
        t: f64,
        omega: f64,
        asymptote: f64,
        tol: f64,
    },

    #[error("Wronskian defect {defect:e} exceeds {limit:e} after refinement")]
    WronskianViolation { defect: f64, limit: f64 },

    #[error("integrator failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("norm drift {drift:e} exceeds {limit:e}")]
    NormDrift { drift: f64, limit: f64 },

    #[error("basis leakage {leakage:e} into the top of the ladder exceeds {limit:e}")]
    Leakage { leakage: f64, limit: f64 },

    #[error("algebra check failed: {0}")]
    Algebra(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Collapse { .. }
            | Error::InvalidArgument(_)
            | Error::InvalidProfile(_)
            | Error::UnknownStrategy { .. } => ErrorClass::Config,
            Error::Range { .. } | Error::Pole { .. } => ErrorClass::Domain,
            Error::AsymptoteNotReached { .. }
            | Error::WronskianViolation { .. }
            | Error::Integration { .. }
            | Error::Truncation(_)
            | Error::NormDrift { .. }
            | Error::Leakage { .. }
            | Error::Algebra(_) => ErrorClass::Solver,
        }
    }

    pub(crate) fn range(what: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Range {
            what,
            value,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
