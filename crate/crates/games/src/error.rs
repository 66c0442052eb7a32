use thiserror::Error;
use wadge_algebra::AlgebraError;
use wadge_automata::AutomataError;
use wadge_model::ModelError;

#[derive(Debug, Error)]
pub enum GameError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("a game needs at least one round")]
    NoRounds,
    #[error("no extension of the prefix lies in the round language; Constrainer wins here")]
    NoExtension,
}

pub type Result<T> = std::result::Result<T, GameError>;
