use std::fmt;
use std::path::PathBuf;

/// A malformed space spec or number list, with the byte offset of the
/// offending token.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub pos: usize,
    pub token: String,
    pub kind: SpecErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpecErrorKind {
    Syntax(String),
    Range(symseq_core::Error),
}

impl SpecError {
    pub(crate) fn syntax(pos: usize, token: &str, msg: &str) -> Self {
        SpecError {
            pos,
            token: token.to_string(),
            kind: SpecErrorKind::Syntax(msg.to_string()),
        }
    }

    pub(crate) fn range(pos: usize, token: &str, err: symseq_core::Error) -> Self {
        SpecError {
            pos,
            token: token.to_string(),
            kind: SpecErrorKind::Range(err),
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self.kind, SpecErrorKind::Range(_))
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let near = if self.token.is_empty() {
            "end of input".to_string()
        } else {
            format!("`{}`", self.token)
        };
        match &self.kind {
            SpecErrorKind::Syntax(msg) => write!(f, "at position {} near {near}: {msg}", self.pos),
            SpecErrorKind::Range(e) => write!(f, "at position {} near {near}: {e}", self.pos),
        }
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{what} {source}")]
    Spec { what: String, source: SpecError },
    #[error("{}: {msg}", path.display())]
    Input { path: PathBuf, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] symseq_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn spec(what: &str, source: SpecError) -> Self {
        CliError::Spec {
            what: what.to_string(),
            source,
        }
    }
}
