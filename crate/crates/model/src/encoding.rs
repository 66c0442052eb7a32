//! Port encodings. A multicontext, context or context environment over `A` is
//! stored as a complete binary tree over `A ∪ {PORT, PAD}`:
//!
//! * a port is a `PORT` node whose whole subtree is `PAD`;
//! * in an environment a port is unary: its left child continues the
//!   environment and its right subtree is all `PAD`.
//!
//! `PAD` never occurs anywhere else.

use crate::{Alphabet, ModelError, Transition, TreeAutomaton};

pub const PORT: &str = "PORT";
pub const PAD: &str = "PAD";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Tree,
    Context,
    Multicontext,
    Environment,
}

/// Automaton over the extended alphabet accepting exactly the valid encodings
/// of `kind` (for `Tree`: the trees without marker letters).
///
/// Multicontext and environment validity are safety conditions. Context
/// validity is not closed (ports escaping to infinity leave a port-free
/// limit), so the state tracking the pending port has priority 1.
pub fn validity_automaton(alphabet: &Alphabet, kind: EncodingKind) -> Result<TreeAutomaton, ModelError> {
    let ext = alphabet.extended()?;
    let k = alphabet.len();
    let (port, pad) = (k, k + 1);
    let t = |state, letter, left, right| Transition { state, letter, left, right };
    let mut tr = Vec::new();
    let priority;
    match kind {
        EncodingKind::Tree => {
            priority = vec![0];
            for a in 0..k {
                tr.push(t(0, a, 0, 0));
            }
        }
        EncodingKind::Context => {
            // 0: the port lies below, 1: no port below, 2: padding
            priority = vec![1, 0, 0];
            for a in 0..k {
                tr.push(t(0, a, 0, 1));
                tr.push(t(0, a, 1, 0));
                tr.push(t(1, a, 1, 1));
            }
            tr.push(t(0, port, 2, 2));
            tr.push(t(2, pad, 2, 2));
        }
        EncodingKind::Multicontext => {
            // 0: ordinary node, 1: padding
            priority = vec![0, 0];
            for a in 0..k {
                tr.push(t(0, a, 0, 0));
            }
            tr.push(t(0, port, 1, 1));
            tr.push(t(1, pad, 1, 1));
        }
        EncodingKind::Environment => {
            priority = vec![0, 0];
            for a in 0..k {
                tr.push(t(0, a, 0, 0));
            }
            tr.push(t(0, port, 0, 1));
            tr.push(t(1, pad, 1, 1));
        }
    }
    TreeAutomaton::new(ext, priority, 0, tr)
}
