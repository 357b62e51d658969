use std::path::PathBuf;

use crate::solver::WaveState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The exponential weight `e^{sigma |xi|}` would leave the representable range.
    #[error("multiplier overflow: sigma * max|xi| = {exponent:.3} exceeds guard {limit}")]
    Overflow { exponent: f64, limit: f64 },

    #[error("final time {time} is beyond the wrap-around horizon {horizon:.6} of the torus")]
    Horizon { time: f64, horizon: f64 },

    /// Non-finite values appeared; `last` is the last finite state.
    #[error("non-finite values at t = {time}")]
    BlowUp { time: f64, last: Box<WaveState> },

    #[error("{0}")]
    Config(#[from] crate::experiment::ConfigError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Overflow { .. } | Error::BlowUp { .. })
    }

    /// Process exit status for the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Overflow { .. } | Error::BlowUp { .. } => 3,
            Error::Io { .. } | Error::Csv { .. } => 1,
            _ => 2,
        }
    }
}
