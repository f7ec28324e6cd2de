use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The potential is singular at the charge, `(r, x4) = (0, 0)`.
    #[error("potential is singular at the charge position (r = 0, x4 = 0)")]
    SingularPoint,

    /// The compact coordinate was not reduced into `[-pi R, pi R]`.
    #[error("x4 = {x4} lies outside [-pi R, pi R] with pi R = {half_period}")]
    OutsideFundamentalCell { x4: f64, half_period: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An integral whose integrand is not integrable at the origin.
    #[error("integral diverges at the origin (local power exponent {exponent:.6})")]
    UnboundedQuotient { exponent: f64 },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("trial function of kind {kind} cannot be evaluated on {domain}")]
    UnsupportedTrial { kind: &'static str, domain: &'static str },

    #[error("eigensolver did not converge: best residual {residual:e} (tolerance {tolerance:e})")]
    EigenNonConvergence { residual: f64, tolerance: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
