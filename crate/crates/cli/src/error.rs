use std::fmt;
use std::path::Path;

use hdi_core::ann::AnnError;

/// A failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration (exit 1).
    Usage(String),
    /// Unreadable, malformed or unusable input (exit 2).
    Data(String),
    /// Training diverged (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Data(_) => 2,
            Self::Numeric(_) => 3,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::Data(format!("{}: {e}", path.display()))
    }

    pub fn in_file(path: &Path, e: impl fmt::Display) -> Self {
        Self::Data(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Data(m) | Self::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<hdi_core::Error> for CliError {
    fn from(e: hdi_core::Error) -> Self {
        match &e {
            hdi_core::Error::Ann(a) if a.is_divergence() => Self::Numeric(e.to_string()),
            hdi_core::Error::Ann(AnnError::InvalidConfig(_) | AnnError::BadTopology(_)) => {
                Self::Usage(e.to_string())
            }
            _ => Self::Data(e.to_string()),
        }
    }
}

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                hdi_core::Error::from(e).into()
            }
        }
    )*};
}

via_core!(
    hdi_core::ingest::IngestError,
    hdi_core::features::FeatureError,
    AnnError,
    hdi_core::kmeans::KMeansError,
    hdi_core::eval::EvalError
);

pub type Result<T, E = CliError> = std::result::Result<T, E>;
