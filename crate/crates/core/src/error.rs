use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("word has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },

    #[error("cannot sample from an empty language")]
    EmptyLanguage,

    #[error("automaton has a cycle on an accepting path")]
    Cyclic,

    #[error("not a trellis: {0}")]
    NotTrellis(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("code is not {channel}-detecting: {witness}")]
    NotDetecting { channel: String, witness: String },

    #[error("arithmetic overflow while counting words")]
    Overflow,
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
