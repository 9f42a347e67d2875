use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A record could not be constructed from its fields.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// A line of a TSV document was malformed.
    #[error("line {line}: {reason}: {content:?}")]
    Parse {
        line: usize,
        reason: String,
        content: String,
    },

    #[error("alignment requires non-empty strings (lemma {lemma:?}, form {form:?})")]
    EmptyAlignmentInput { lemma: String, form: String },

    #[error("cannot {0} from an empty set of triples")]
    NoTriples(&'static str),

    #[error("paradigm for {lemma:?} has an unfilled training cell {bundle}")]
    UnfilledTrainingCell { lemma: String, bundle: String },

    #[error("sampling: {0}")]
    Sampling(String),

    #[error("evaluation: {0}")]
    Evaluation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    /// Short stable identifier, used by the command line for error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Invalid { .. } => "E_INVALID",
            Error::Parse { .. } => "E_PARSE",
            Error::EmptyAlignmentInput { .. } => "E_ALIGN",
            Error::NoTriples(_) => "E_EMPTY",
            Error::UnfilledTrainingCell { .. } => "E_UNFILLED",
            Error::Sampling(_) => "E_SAMPLE",
            Error::Evaluation(_) => "E_EVAL",
            Error::Io(_) => "E_IO",
        }
    }
}
