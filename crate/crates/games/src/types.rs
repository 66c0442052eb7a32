//! Games on syntactic types. A tree type stands for its class of trees and a
//! context type for its class of contexts, encoded over the extended
//! alphabet. Memberships in `ℋ_L` and `𝒱_L` are chain nonemptiness queries,
//! memoized on chain suffixes since the chain is built from the last round.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use wadge_algebra::SyntacticAlgebra;
use wadge_automata::{reduce, trim};
use wadge_model::{Transition, TreeAutomaton};

use crate::chain::{chain_step, nonempty};
use crate::error::Result;

/// For every syntactic context type `v`, an automaton over port encodings
/// accepting exactly the contexts of type `v`.
///
/// The automaton walks down the port path keeping the type of the context
/// read so far, and checks every tree hanging off the path against its tree
/// class. Path states have priority 1, so the port must eventually come.
pub fn context_class_automata(syn: &SyntacticAlgebra) -> Result<Vec<TreeAutomaton>> {
    let alg = &syn.algebra;
    let base = syn.stage.automaton.alphabet();
    let ext = base.extended()?;
    let (port, pad) = (base.len(), base.len() + 1);
    let nv = alg.num_context_types();
    let pad_state = nv + 1;
    let mut priority = vec![1; nv + 1];
    priority.push(0);
    let mut side_init = Vec::new();
    let mut common = vec![Transition { state: pad_state, letter: pad, left: pad_state, right: pad_state }];
    for class in &syn.classes {
        let off = priority.len();
        priority.extend_from_slice(class.priorities());
        side_init.push(off + class.initial());
        common.extend(class.transitions().iter().map(|t| Transition {
            state: t.state + off,
            letter: t.letter,
            left: t.left + off,
            right: t.right + off,
        }));
    }
    for p in 0..=nv {
        for c in base.letters() {
            for (h, &s) in side_init.iter().enumerate() {
                let l = alg.compose(p, alg.inject_left(c, h));
                let r = alg.compose(p, alg.inject_right(c, h));
                common.push(Transition { state: p, letter: c, left: l, right: s });
                common.push(Transition { state: p, letter: c, left: s, right: r });
            }
        }
    }
    let mut out = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut tr = common.clone();
        tr.push(Transition { state: v, letter: port, left: pad_state, right: pad_state });
        let a = TreeAutomaton::new(ext.clone(), priority.clone(), alg.unit(), tr)?;
        out.push(reduce(&trim(&a)));
    }
    Ok(out)
}

type Memo = Mutex<HashMap<Vec<usize>, Arc<TreeAutomaton>>>;

/// Membership oracle for `ℋ_L` and `𝒱_L` over one syntactic algebra.
pub struct TypeGames<'a> {
    syn: &'a SyntacticAlgebra,
    contexts: Vec<TreeAutomaton>,
    tree_heads: Memo,
    context_heads: Memo,
}

impl<'a> TypeGames<'a> {
    pub fn new(syn: &'a SyntacticAlgebra) -> Result<Self> {
        Ok(TypeGames {
            syn,
            contexts: context_class_automata(syn)?,
            tree_heads: Mutex::new(HashMap::new()),
            context_heads: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &'a SyntacticAlgebra {
        self.syn
    }

    pub fn tree_class(&self, h: usize) -> &TreeAutomaton {
        &self.syn.classes[h]
    }

    pub fn context_class(&self, v: usize) -> &TreeAutomaton {
        &self.contexts[v]
    }

    /// First chain element of `H(h₁,…,hₙ)`; `seq` must be nonempty.
    pub fn tree_chain_head(&self, seq: &[usize]) -> Result<Arc<TreeAutomaton>> {
        head(seq, &self.tree_heads, &|h| &self.syn.classes[h])
    }

    /// First chain element of `𝒱(v₁,…,vₙ)`; `seq` must be nonempty.
    pub fn context_chain_head(&self, seq: &[usize]) -> Result<Arc<TreeAutomaton>> {
        head(seq, &self.context_heads, &|v| &self.contexts[v])
    }

    /// `(h₁,…,hₙ) ∈ ℋ_L`; the empty word belongs.
    pub fn wins_h(&self, seq: &[usize]) -> Result<bool> {
        if seq.is_empty() {
            return Ok(true);
        }
        let w = self.tree_chain_head(seq)?;
        Ok(nonempty(&w))
    }

    /// `(v₁,…,vₙ) ∈ 𝒱_L`; the empty word belongs.
    pub fn wins_v(&self, seq: &[usize]) -> Result<bool> {
        if seq.is_empty() {
            return Ok(true);
        }
        let w = self.context_chain_head(seq)?;
        Ok(nonempty(&w))
    }
}

fn head<'b>(seq: &[usize], memo: &Memo, class: &dyn Fn(usize) -> &'b TreeAutomaton) -> Result<Arc<TreeAutomaton>> {
    if let Some(w) = memo.lock().unwrap().get(seq) {
        return Ok(w.clone());
    }
    let first = class(seq[0]);
    let w = if seq.len() == 1 {
        Arc::new(first.clone())
    } else {
        let rest = head(&seq[1..], memo, class)?;
        Arc::new(chain_step(first, &rest)?)
    };
    memo.lock().unwrap().insert(seq.to_vec(), w.clone());
    Ok(w)
}

/// `(h₁,…,hₙ) ∈ ℋ_L`.
pub fn wins_h_types(syn: &SyntacticAlgebra, seq: &[usize]) -> Result<bool> {
    TypeGames::new(syn)?.wins_h(seq)
}

/// `(v₁,…,vₙ) ∈ 𝒱_L`.
pub fn wins_v_types(syn: &SyntacticAlgebra, seq: &[usize]) -> Result<bool> {
    TypeGames::new(syn)?.wins_v(seq)
}
