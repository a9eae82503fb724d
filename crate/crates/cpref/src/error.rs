use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed XML: {0}")]
    MalformedXml(String),

    #[error("<{element}>: {message}")]
    Structure { element: String, message: String },

    #[error("statement {statement}: malformed condition `{text}`: expected var=value")]
    MalformedCondition { statement: String, text: String },

    #[error("statement {statement}: malformed preference `{text}`: expected better:worse")]
    MalformedPreference { statement: String, text: String },

    #[error("unknown query kind `{0}`: expected DOMINANCE, CONSISTENCY, SUBSUMPTION or EQUIVALENCE")]
    UnknownQueryKind(String),

    #[error("{0}")]
    Core(#[from] cpref_core::Error),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("model checker `{}` could not be started: {source}", .path.display())]
    CheckerNotFound {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unrecognized model checker output: {message}")]
    CheckerParseFailure { message: String, raw: String },

    #[error("engines disagree: {0}")]
    Divergence(String),

    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", .path.display())]
    InFile { path: PathBuf, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structure(element: &str, message: impl Into<String>) -> Self {
        Error::Structure {
            element: element.to_string(),
            message: message.into(),
        }
    }

    /// Names the file the error came from.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        Error::InFile {
            path: path.to_path_buf(),
            source: Box::new(self),
        }
    }

    /// Process exit status: 2 for invalid input, 3 when an
    /// engine runs out of resources, 4 when engines or proofs disagree, 1
    /// otherwise.
    pub fn exit_code(&self) -> i32 {
        use cpref_core::Error as C;
        match self {
            Error::InFile { source, .. } => source.exit_code(),
            Error::MalformedXml(_)
            | Error::Structure { .. }
            | Error::MalformedCondition { .. }
            | Error::MalformedPreference { .. }
            | Error::UnknownQueryKind(_)
            | Error::Usage(_) => 2,
            Error::Core(C::TooLarge { .. } | C::NodeBudgetExceeded { .. }) => 3,
            Error::Core(C::InternalInconsistency(_) | C::ManagerMismatch) | Error::Divergence(_) => 4,
            Error::Core(_) => 2,
            Error::Io { .. } | Error::CheckerNotFound { .. } | Error::CheckerParseFailure { .. } => 1,
        }
    }
}
