use jackson_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown function '{0}' (expected one of exp_q, etilde_q, E_q, sin_q, cos_q, phi_rs)")]
    UnknownFunction(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::InvalidQ(_)
                | Error::NearRootOfUnity { .. }
                | Error::Domain(_)
                | Error::InvalidArgument(_)
                | Error::InsufficientGrid(_)
                | Error::TargetUnsupported(_)
                | Error::OutsideSafeRadius { .. }
                | Error::OutsideDomain(_)
                | Error::NotCoprime(_) => EXIT_USAGE,
                _ => EXIT_CHECK_FAILED,
            },
            CliError::Io(_) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        }
    }
}
