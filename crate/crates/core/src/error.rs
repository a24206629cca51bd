use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("composition requires an inner series with zero constant term")]
    CompositionDomain,

    #[error("series is not invertible: needs zero constant term and nonzero linear term")]
    NonInvertible,

    #[error("exp_series requires zero constant term")]
    ExpDomain,

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("value {t} outside inversion range [0, {max}]")]
    Range { t: f64, max: f64 },

    #[error("invalid Butcher tableau: {0}")]
    Tableau(String),

    #[error("integration failed: non-finite right-hand side at t = {t}")]
    IntegrationFailure { t: f64 },

    #[error("degenerate Pade system for [{l}/{m}]")]
    DegeneratePade { l: usize, m: usize },

    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,

    #[error("parse error: {0}")]
    Parse(String),
}
