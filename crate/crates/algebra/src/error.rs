use thiserror::Error;
use wadge_automata::AutomataError;
use wadge_model::ModelError;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("automaton too large: {0}")]
    TooLarge(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
