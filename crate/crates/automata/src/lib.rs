//! Parity tree automata operations: emptiness, membership, closure, Boolean
//! operations, and complementation through determinized branch automata.

mod bits;
mod complement;
mod engine;
mod error;
mod monitor;
pub mod ops;
mod safra;
mod word;

pub use complement::{
    assisted_complement, complement, conjunction, difference_witness, equivalent, included, is_universal, raw_complement, realized_types,
    state_combination,
};
pub use engine::{refutation_automaton, Budget};
pub use error::{AutomataError, Result};
pub use monitor::ConditionMonitor;
pub use ops::{
    accepting_states, accepts_regular_tree, closure, compress_priorities, intersection, is_empty, minimize_priorities, prefix_automaton,
    productive_states, reduce, restrict, trim, union,
};
pub use word::{determinize_word, WordAutomaton};
