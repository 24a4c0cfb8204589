use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("round-trip delay {delay_s:.4e} s is not shorter than the chirp half-duration {t_half_s:.4e} s (echo would fall in the blind spot)")]
    BlindSpot { delay_s: f64, t_half_s: f64 },

    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    #[error("ambiguous beat regime: up-segment beat {f_up_hz:.3} Hz, down-segment beat {f_down_hz:.3} Hz (requires Doppler > delay term)")]
    AmbiguousRegime { f_up_hz: f64, f_down_hz: f64 },

    #[error("resolution undefined: {0}")]
    ResolutionUndefined(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors that stem from invalid user input rather than a
    /// failure while running.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Config(_) | Error::BlindSpot { .. }
        )
    }
}
