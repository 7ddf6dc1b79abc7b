use charvar_core::acfc::AcfcError;
use charvar_core::distinguish::DistinguishError;
use charvar_core::gf::GfError;
use charvar_core::presentation::PresentationError;
use charvar_core::repvar::RepvarError;
use charvar_core::sl2::Sl2Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 usage or parse, 2 budget, 3 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::MissingPeripheral | PresentationError::InvalidSlope { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<RepvarError> for CliError {
    fn from(e: RepvarError) -> Self {
        match e {
            RepvarError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            RepvarError::Internal(_) => CliError::Internal(e.to_string()),
            RepvarError::Field(f) => f.into(),
            RepvarError::Sl2(Sl2Error::CeilingExceeded { .. }) => CliError::Budget(e.to_string()),
            RepvarError::Sl2(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<AcfcError> for CliError {
    fn from(e: AcfcError) -> Self {
        match e {
            AcfcError::GuardExceeded { .. } | AcfcError::ExpansionTooLarge => CliError::Budget(e.to_string()),
            AcfcError::Field(f) => f.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DistinguishError> for CliError {
    fn from(e: DistinguishError) -> Self {
        match e {
            DistinguishError::Repvar(r) => r.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
