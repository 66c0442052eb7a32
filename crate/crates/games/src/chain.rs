use wadge_automata::{closure, included, intersection, is_empty, prefix_automaton, productive_states, reduce, trim, AutomataError, Budget};
use wadge_model::{FinitePrefix, ModelError, RegularTree, TreeAutomaton};

use crate::error::{GameError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    Alternator,
    Constrainer,
}

#[derive(Clone, Debug)]
pub struct GameVerdict {
    pub winner: Winner,
    /// `W₁,…,Wₙ`
    pub round_languages: Vec<TreeAutomaton>,
    /// a tree accepted by `W₁` when Alternator wins
    pub witness: Option<RegularTree>,
}

impl GameVerdict {
    pub fn alternator_wins(&self) -> bool {
        self.winner == Winner::Alternator
    }
}

/// Length of the word after collapsing runs of equal letters.
pub fn alternation<T: PartialEq>(word: &[T]) -> usize {
    if word.is_empty() {
        return 0;
    }
    1 + word.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Closures up to this size are complemented to test whether they already
/// contain the round language.
const INCLUSION_TEST_STATES: usize = 8;

/// `L ∩ closure(W)`, trimmed and reduced. When `L ⊆ closure(W)` the result is
/// `L` itself; testing this on small closures keeps chains from growing once
/// their languages have stabilized.
pub(crate) fn chain_step(l: &TreeAutomaton, w: &TreeAutomaton) -> Result<TreeAutomaton> {
    if l.alphabet() != w.alphabet() {
        return Err(ModelError::AlphabetMismatch.into());
    }
    if !nonempty(w) {
        return Ok(TreeAutomaton::empty(l.alphabet()));
    }
    let c = reduce(&closure(w));
    if c.num_states() <= INCLUSION_TEST_STATES {
        // the test is only a shortcut, so a capped complement falls through
        match included(l, &c, Budget::default()) {
            Ok(true) => return Ok(reduce(&trim(l))),
            Ok(false) | Err(AutomataError::ResourceCap { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(reduce(&trim(&intersection(l, &c)?)))
}

pub(crate) fn nonempty(a: &TreeAutomaton) -> bool {
    productive_states(a)[a.initial()]
}

/// The chain `W₁,…,Wₙ` for `L₁,…,Lₙ`.
pub fn w_chain(langs: &[&TreeAutomaton]) -> Result<Vec<TreeAutomaton>> {
    let Some(last) = langs.last() else { return Err(GameError::NoRounds) };
    if langs.iter().any(|l| l.alphabet() != last.alphabet()) {
        return Err(ModelError::AlphabetMismatch.into());
    }
    let mut out = vec![reduce(&trim(last))];
    for l in langs[..langs.len() - 1].iter().rev() {
        let next = chain_step(l, out.last().unwrap())?;
        out.push(next);
    }
    out.reverse();
    Ok(out)
}

fn verdict(round_languages: Vec<TreeAutomaton>) -> GameVerdict {
    let (empty, witness) = is_empty(&round_languages[0]);
    let winner = if empty { Winner::Constrainer } else { Winner::Alternator };
    GameVerdict { winner, round_languages, witness }
}

/// Decides `H(L₁,…,Lₙ)`.
pub fn wins_h(langs: &[TreeAutomaton]) -> Result<GameVerdict> {
    let refs: Vec<&TreeAutomaton> = langs.iter().collect();
    Ok(verdict(w_chain(&refs)?))
}

/// Decides `H^{∈,∉}(L, n)`, whose rounds alternate between `L` and `Lc`.
pub fn wins_h_inout(l: &TreeAutomaton, lc: &TreeAutomaton, n: usize) -> Result<GameVerdict> {
    let refs: Vec<&TreeAutomaton> = (0..n).map(|i| if i % 2 == 0 { l } else { lc }).collect();
    Ok(verdict(w_chain(&refs)?))
}

/// Smallest `n ≤ max_n` such that Constrainer wins `H^{∈,∉}(L, n+1)`, i.e.
/// `L` is a difference of `n` open sets. Level 0 means `L` is empty.
pub fn difference_level(l: &TreeAutomaton, lc: &TreeAutomaton, max_n: usize) -> Result<Option<usize>> {
    if l.alphabet() != lc.alphabet() {
        return Err(ModelError::AlphabetMismatch.into());
    }
    // a = chain head of L, Lc, L, … with k rounds; b = the same from Lc
    let (l, lc) = (reduce(&trim(l)), reduce(&trim(lc)));
    let (mut a, mut b) = (l.clone(), lc.clone());
    for n in 0..=max_n {
        if !nonempty(&a) {
            return Ok(Some(n));
        }
        if n == max_n {
            break;
        }
        let next_a = chain_step(&l, &b)?;
        b = chain_step(&lc, &a)?;
        a = next_a;
    }
    Ok(None)
}

/// A regular tree accepted by `w` and extending `prefix`.
pub fn extract_round_witness(prefix: &FinitePrefix, w: &TreeAutomaton) -> Result<RegularTree> {
    let p = prefix_automaton(w.alphabet(), prefix);
    let (_, witness) = is_empty(&intersection(w, &p)?);
    witness.ok_or(GameError::NoExtension)
}
