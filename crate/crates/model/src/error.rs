use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown letter \"{letter}\"")]
    UnknownLetter { line: usize, letter: String },
    #[error("line {line}: unknown state {state}")]
    UnknownState { line: usize, state: String },
    #[error("missing priority for state {0}")]
    MissingPriority(usize),
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("invalid automaton: {0}")]
    Automaton(String),
    #[error("invalid regular tree: {0}")]
    Tree(String),
    #[error("alphabet mismatch")]
    AlphabetMismatch,
}
