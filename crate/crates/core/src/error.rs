use crate::spectral::Slot;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the n-complex algebra and the analysis built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("number lies on a nodal hypersurface (vanishing coordinates: {})", fmt_slots(.slots))]
    NonInvertible { slots: Vec<Slot> },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NotConverged { what: String, iterations: usize },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("azimuthal/planar angle {k} is undefined (degenerate configuration)")]
    DegenerateAngle { k: usize },

    #[error("amplitude undefined: determinant {nu} is not positive")]
    AmplitudeUndefined { nu: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("path sample {sample} lies on a singular hypersurface ({slot})")]
    SingularPath { sample: usize, slot: Slot },

    #[error("projected path passes through the projected center in plane {k}")]
    OnCurve { k: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonInvertible { .. } => "NonInvertible",
            Error::DomainError(_) => "DomainError",
            Error::NotConverged { .. } => "NotConverged",
            Error::Overflow(_) => "Overflow",
            Error::DegenerateAngle { .. } => "DegenerateAngle",
            Error::AmplitudeUndefined { .. } => "AmplitudeUndefined",
            Error::InsufficientData(_) => "InsufficientData",
            Error::SingularPath { .. } => "SingularPath",
            Error::OnCurve { .. } => "OnCurve",
            Error::Parse(_) => "Parse",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::DomainError(msg.into())
    }
}

fn fmt_slots(slots: &[Slot]) -> String {
    slots
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
