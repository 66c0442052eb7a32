use thiserror::Error;
use wadge_algebra::AlgebraError;
use wadge_automata::AutomataError;
use wadge_games::GameError;
use wadge_model::ModelError;

use crate::report::AlgebraSizes;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// A resource cap stopped the pipeline; `completed` lists the finished
    /// stages and `algebra` is present once the syntactic algebra was built.
    #[error("resource cap during {stage}: {message}")]
    ResourceCap { stage: &'static str, message: String, completed: Vec<&'static str>, algebra: Option<AlgebraSizes> },
    #[error("{stage}: {message}")]
    Failed { stage: &'static str, message: String },
    #[error("report invariant violated: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

pub(crate) fn automata_cap(e: &AutomataError) -> bool {
    matches!(e, AutomataError::ResourceCap { .. } | AutomataError::Deadline)
}

pub(crate) fn algebra_cap(e: &AlgebraError) -> bool {
    match e {
        AlgebraError::TooLarge(_) => true,
        AlgebraError::Automata(a) => automata_cap(a),
        _ => false,
    }
}

pub(crate) fn game_cap(e: &GameError) -> bool {
    match e {
        GameError::Automata(a) => automata_cap(a),
        GameError::Algebra(a) => algebra_cap(a),
        _ => false,
    }
}
