//! Thin algebras: finite carriers of tree types and context types with
//! composition, action, infinite iteration and one-step injections.
//!
//! [`stage_one_algebra`] interprets an automaton's trees as the sets of states
//! accepting them and contexts as sets of `(state, priority, port state)`
//! triples. [`syntactic_algebra`] then quotients by language equivalence,
//! decided on plugging automata over port encodings.

mod error;
mod quotient;
mod stage_one;
mod thin;

pub use error::{AlgebraError, Result};
pub use quotient::{
    compute_equivalence, moore_partition, plugging_automaton_context, plugging_automaton_tree, quotient, syntactic_algebra,
    Partition, SyntacticAlgebra,
};
pub use stage_one::{
    evaluate_type, realized_context_types, realized_tree_types, stage_one_algebra, Limits, StageOne, TripleLayout,
};
pub use thin::{sharp_exponent, Tables, ThinAlgebra};
