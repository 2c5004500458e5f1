use thiserror::Error;

/// Errors produced by corpus loading, metric computation and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(String),

    #[error("{file}: missing required column `{column}`")]
    MissingColumn { file: String, column: String },

    #[error("{file}: line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("duplicate segment id `{0}`")]
    DuplicateSegment(String),

    #[error("duplicate session for segment `{segment}` and annotator `{annotator}`")]
    DuplicateSession { segment: String, annotator: String },

    #[error("session references unknown segment `{0}`")]
    UnknownSegment(String),

    #[error("empty reference")]
    EmptyReference,

    #[error("empty segment")]
    EmptySegment,

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("degenerate times: {0}")]
    DegenerateTimes(String),

    #[error("NaN value for segment `{0}`")]
    NanValue(String),

    #[error("mismatched ranking id sets")]
    MismatchedIds,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing metric column `{0}`")]
    MissingMetric(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    /// Whether the error was caused by malformed or insufficient user input,
    /// as opposed to a violated internal invariant.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_input_error(),
            Error::EmptyReference | Error::EmptySegment | Error::NanValue(_) => false,
            _ => true,
        }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
