use thiserror::Error;

/// Errors raised by the simulator, the verifier and the blindness analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("state vector is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("both measurement branches have vanishing probability ({0:e}, {1:e})")]
    DegenerateMeasurement(f64, f64),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("detector signals (m1+ = {plus}, m1- = {minus}) are not one-hot")]
    DetectorFault { plus: bool, minus: bool },

    #[error("transcript contains no {0} rounds")]
    EmptyRoundClass(&'static str),

    #[error("majority vote is tied at {0} rounds per outcome")]
    MajorityTie(usize),

    #[error("ill-posed thresholds: {0}")]
    IllPosedThresholds(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
