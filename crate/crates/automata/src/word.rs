//! Parity automata on infinite words and their determinization.

use std::collections::HashMap;

use crate::bits::Bits;
use crate::error::{AutomataError, Result};
use crate::safra::{parity_bound, step, NbaView, SafraTree};

/// Max-even parity word automaton over letters `0..letters`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordAutomaton {
    pub letters: usize,
    pub initial: usize,
    pub priority: Vec<u32>,
    /// `delta[q][a]` lists the successors of `q` on `a`
    pub delta: Vec<Vec<Vec<usize>>>,
    pub deterministic: bool,
}

impl WordAutomaton {
    pub fn new(letters: usize, initial: usize, priority: Vec<u32>, delta: Vec<Vec<Vec<usize>>>) -> WordAutomaton {
        assert_eq!(priority.len(), delta.len());
        assert!(initial < priority.len());
        let n = priority.len();
        for row in &delta {
            assert_eq!(row.len(), letters);
            assert!(row.iter().flatten().all(|&t| t < n));
        }
        let deterministic = delta.iter().all(|row| row.iter().all(|s| s.len() == 1));
        WordAutomaton { letters, initial, priority, delta, deterministic }
    }

    pub fn num_states(&self) -> usize {
        self.priority.len()
    }

    /// Membership of the ultimately periodic word `stem · cycle^ω`.
    pub fn accepts_lasso(&self, stem: &[usize], cycle: &[usize]) -> bool {
        assert!(!cycle.is_empty());
        let word: Vec<usize> = stem.iter().chain(cycle).copied().collect();
        let len = word.len();
        let next_pos = |i: usize| if i + 1 < len { i + 1 } else { stem.len() };
        let n = self.num_states();
        let id = |q: usize, i: usize| q * len + i;
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n * len];
        for q in 0..n {
            for i in 0..len {
                for &t in &self.delta[q][word[i]] {
                    succ[id(q, i)].push(id(t, next_pos(i)));
                }
            }
        }
        let prio = |v: usize| self.priority[v / len];
        let mut reach = vec![false; n * len];
        let mut stack = vec![id(self.initial, 0)];
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut reach[v], true) {
                stack.extend(succ[v].iter().copied());
            }
        }
        // accept iff some reachable vertex of even priority p lies on a cycle
        // through vertices of priority <= p
        (0..n * len).any(|v| {
            if !reach[v] || prio(v) % 2 == 1 {
                return false;
            }
            let p = prio(v);
            let mut seen = vec![false; n * len];
            let mut stack = succ[v].clone();
            while let Some(x) = stack.pop() {
                if x == v {
                    return true;
                }
                if seen[x] || prio(x) > p {
                    continue;
                }
                seen[x] = true;
                stack.extend(succ[x].iter().copied());
            }
            false
        })
    }
}

/// Equivalent deterministic parity automaton via Safra trees. States beyond
/// `max_states` abort with a resource-cap error.
pub fn determinize_word(w: &WordAutomaton, max_states: usize) -> Result<WordAutomaton> {
    let top = w.priority.iter().copied().max().unwrap_or(0);
    let view = NbaView::new(w.num_states(), top);
    let width = view.width();
    let bound = parity_bound(width);
    let mut root = Bits::new(width);
    root.insert(view.bottom(w.initial));
    // state 0 is the rejecting sink
    let mut index: HashMap<(SafraTree, u32), usize> = HashMap::new();
    let mut order: Vec<(SafraTree, u32)> = Vec::new();
    let mut priority = vec![1];
    let mut delta: Vec<Vec<Vec<usize>>> = vec![vec![vec![0]; w.letters]];
    let start = SafraTree::root(root).expect("nonempty root");
    index.insert((start.clone(), 0), 1);
    order.push((start, 0));
    priority.push(0);
    delta.push(Vec::new());
    // the priority of a state moves onto its incoming edges
    let succ_tables: Vec<Vec<Vec<(usize, u32)>>> = (0..w.letters)
        .map(|a| (0..w.num_states()).map(|q| w.delta[q][a].iter().map(|&t| (t, w.priority[t])).collect()).collect())
        .collect();
    let mut i = 0;
    while i < order.len() {
        let tree = order[i].0.clone();
        let mut row = Vec::with_capacity(w.letters);
        for succ in &succ_tables {
            let target = match step(&tree, width, |l| view.post(l, succ)) {
                None => 0,
                Some((t, p)) => {
                    let key = (t, bound - p);
                    if let Some(&id) = index.get(&key) {
                        id
                    } else {
                        if order.len() + 1 >= max_states {
                            return Err(AutomataError::ResourceCap { what: "deterministic states", limit: max_states });
                        }
                        let id = order.len() + 1;
                        priority.push(key.1);
                        delta.push(Vec::new());
                        index.insert(key.clone(), id);
                        order.push(key);
                        id
                    }
                }
            };
            row.push(vec![target]);
        }
        delta[i + 1] = row;
        i += 1;
    }
    Ok(WordAutomaton::new(w.letters, 1, priority, delta))
}

