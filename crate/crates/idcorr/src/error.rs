use thiserror::Error;

/// Errors produced while ingesting, extracting or scoring documents.
#[derive(Debug, Error)]
pub enum Error {
    /// The input text is not well-formed JSON.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// The input parsed but violates the document model (arrays, null,
    /// duplicate keys, excessive nesting, non-object root).
    #[error("structural error: {message}")]
    Structure { message: String },

    /// A raw attribute key normalized to the empty string.
    #[error("key {raw:?} normalizes to an empty token")]
    KeyNormalization { raw: String },

    /// An attribute dictionary failed validation or could not be loaded.
    #[error("invalid attribute dictionary: {message}")]
    Dictionary { message: String },

    /// A document asserts conflicting values for a scalar attribute.
    #[error("extraction error in document {doc_id:?}: {message}")]
    Extraction { doc_id: String, message: String },

    /// A word contained no letters to encode phonetically.
    #[error("cannot encode {word:?}: no letters")]
    Phonetic { word: String },

    /// A document set cannot be scored as given.
    #[error("{message}")]
    ScoreSet { message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
