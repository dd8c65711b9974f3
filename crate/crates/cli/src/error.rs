use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] tropdet::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use tropdet::Error as E;
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                E::Parse(_) => "parse",
                E::Dimension(_) | E::IndexOutOfRange(_) => "dimension",
                E::InvalidArgument(_) => "invalid_argument",
                E::NotInPrevariety(_) | E::Precondition(_) | E::NotAnEdge(..) => "precondition",
                E::NotBicolored(_) | E::InadmissibleColoring(_) | E::InvalidPlane(_) => "precondition",
                E::Budget(_) => "budget",
                E::Internal(_) => "internal",
            },
        }
    }

    /// 2 usage, 3 unreadable or malformed input, 4 dimension or precondition,
    /// 5 budget exhausted, 6 internal.
    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "usage" => 2,
            "io" | "parse" => 3,
            "budget" => 5,
            "internal" => 6,
            _ => 4,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() } })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
