//! Core data model: alphabets, nondeterministic parity tree automata over
//! infinite binary trees, regular trees given as finite graphs, finite
//! prefixes, and the complete-binary-tree encodings used for contexts,
//! multicontexts and context environments.
//!
//! Acceptance is always max-even: a run is accepting when on every branch the
//! largest priority seen infinitely often is even.

mod alphabet;
mod automaton;
mod encoding;
mod error;
mod prefix;
mod tree;

pub use alphabet::{Alphabet, Letter};
pub use automaton::{State, Transition, TreeAutomaton};
pub use encoding::{validity_automaton, EncodingKind, PAD, PORT};
pub use error::ModelError;
pub use prefix::{Dir, FinitePrefix};
pub use tree::RegularTree;
