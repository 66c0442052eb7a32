//! Alternation games between Alternator and Constrainer.
//!
//! A game `H(L₁,…,Lₙ)` is decided backwards: `Wₙ = Lₙ` and
//! `Wᵢ = Lᵢ ∩ closure(Wᵢ₊₁)`. A point of `Lᵢ` is a safe move exactly when each
//! of its open neighbourhoods still meets `Wᵢ₊₁`, so Alternator wins iff
//! `W₁` is nonempty. The same chain over port encodings decides the games on
//! context types.

mod chain;
mod error;
mod types;

pub use chain::{alternation, difference_level, extract_round_witness, w_chain, wins_h, wins_h_inout, GameVerdict, Winner};
pub use error::{GameError, Result};
pub use types::{context_class_automata, wins_h_types, wins_v_types, TypeGames};
