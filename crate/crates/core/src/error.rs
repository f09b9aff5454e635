use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e} > {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("Bloch vector length {0} exceeds 1")]
    InvalidBloch(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("rate is not finite at t = {t}")]
    RateSingularityInsideWindow { t: f64 },

    #[error("adaptive step size underflow at t = {t} (h = {h:.3e})")]
    StepFailure { t: f64, h: f64 },

    #[error("pair ({i}, {j}) has vanishing weight {weight:.3e} but matrix element {element:.3e}")]
    SingularPair {
        i: usize,
        j: usize,
        weight: f64,
        element: f64,
    },

    #[error("eigenvalue {index} is {value:.3e} while its differential is nonzero")]
    ZeroEigenvalue { index: usize, value: f64 },

    #[error("trajectory touches the pure-state boundary at t = {t}")]
    BoundaryContact { t: f64 },

    #[error("metric is degenerate (det = {det:.3e}) near the evaluation point")]
    DegenerateMetric { det: f64 },

    #[error("base metric vanishes: all spectral weights are equal")]
    DegenerateBase,

    #[error("scalar curvature of a two-dimensional cone is concentrated at the tip; use the deficit angle")]
    TwoDimensionalCone,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("power-law fit residual {residual:.3e} exceeds {limit:.1e}")]
    FitDiverged { residual: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn messages_name_the_offending_quantity() {
        let e = Error::param("zeta", "must be positive");
        assert_eq!(e.to_string(), "invalid parameter `zeta`: must be positive");
        let s = Error::SingularPair {
            i: 0,
            j: 1,
            weight: 0.0,
            element: 0.5,
        };
        assert!(s.to_string().contains("(0, 1)"));
    }
}
