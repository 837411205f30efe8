use serde::Serialize;
use tamejump_core::dvr::DvrError;
use tamejump_core::glattice::LatticeError;
use tamejump_core::jumps::JumpError;
use tamejump_core::weights::WeightError;
use tamejump_core::zeta::ZetaError;

/// Errors surfaced by the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("descriptor error: {0}")]
    Descriptor(String),
    #[error("{0}")]
    BelowThreshold(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Descriptor(_) | CliError::Json(_) => 2,
            CliError::BelowThreshold(_) => 3,
            CliError::Computation(_) | CliError::Io(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Descriptor(_) => "descriptor",
            CliError::BelowThreshold(_) => "below_threshold",
            CliError::Mismatch(_) => "mismatch",
            CliError::Computation(_) => "computation",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorReport {
            error: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        })
        .expect("error report serializes")
    }
}

impl From<JumpError> for CliError {
    fn from(e: JumpError) -> Self {
        match e {
            JumpError::BelowThreshold { .. } => CliError::BelowThreshold(e.to_string()),
            JumpError::Inconsistency(_) | JumpError::Unsupported(_) => CliError::Computation(e.to_string()),
            JumpError::InvalidDescriptor(_) | JumpError::IllegalQuotient(_) => CliError::Descriptor(e.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::Jump(j) => j.into(),
            ZetaError::Lattice(l) => l.into(),
            ZetaError::InvalidInput(m) => CliError::Descriptor(m),
            ZetaError::Unsupported(m) => CliError::Computation(m),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::InvalidGroup(_) | LatticeError::InvalidLattice(_) => CliError::Descriptor(e.to_string()),
            LatticeError::Unsupported(_) | LatticeError::Internal(_) => CliError::Computation(e.to_string()),
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        match e {
            WeightError::Equivariance { .. } => CliError::Computation(e.to_string()),
            _ => CliError::Descriptor(e.to_string()),
        }
    }
}

impl From<DvrError> for CliError {
    fn from(e: DvrError) -> Self {
        CliError::Computation(e.to_string())
    }
}
