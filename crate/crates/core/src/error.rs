use thiserror::Error;

/// Errors raised anywhere in the stress pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("position z = {z} is outside the profile domain{detail}")]
    Domain { z: f64, detail: String },

    #[error("invalid profile: {0}")]
    Validation(String),

    #[error("refractive index jumps at z = {z} ({left} -> {right})")]
    IndexJump { z: f64, left: f64, right: f64 },

    #[error("impedance blow-up at z = {z}: the propagated solution has a zero")]
    PoleCrossing { z: f64 },

    #[error("ODE integration failed at z = {z}: {reason}")]
    Solver { z: f64, reason: String },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(z: f64, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        let detail = if detail.is_empty() {
            detail
        } else {
            format!(": {detail}")
        };
        Error::Domain { z, detail }
    }
}
