use thiserror::Error;

/// Errors raised by the computational and export layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate surface: parameter ranges leave no faces")]
    DegenerateSurface,

    #[error("singular load: Z_L = -Z_0 has no reflection coefficient")]
    SingularLoad,

    #[error("field not transverse to propagation (|E.r| = {residual:e})")]
    NotTransverse { residual: f64 },

    #[error("null field: polarization undefined")]
    NullField,

    #[error("degenerate pattern: radiated intensity is zero everywhere")]
    DegeneratePattern,

    #[error("anti-resonant length {length} (input current node)")]
    AntiResonant { length: f64 },

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("{0}")]
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
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
