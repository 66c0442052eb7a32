use thiserror::Error;
use wadge_model::{ModelError, RegularTree};

#[derive(Debug, Error)]
pub enum AutomataError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("resource cap exceeded: more than {limit} {what}")]
    ResourceCap { what: &'static str, limit: usize },
    #[error("deadline reached")]
    Deadline,
    #[error("claimed complement intersects the language")]
    NotDisjoint { witness: RegularTree },
    #[error("sampled tree accepted by {accepted_by} of the two automata")]
    SamplingContradiction { tree: RegularTree, accepted_by: &'static str },
}

pub type Result<T> = std::result::Result<T, AutomataError>;
