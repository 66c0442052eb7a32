use std::collections::HashMap;
use std::fmt::Write as _;

use wadge_automata::{accepting_states, realized_types, Budget};
use wadge_model::{RegularTree, State, TreeAutomaton};

use crate::error::{AlgebraError, Result};
use crate::thin::{Tables, ThinAlgebra};

/// Caps for the stage-one construction.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_states: usize,
    pub max_context_types: usize,
    pub budget: Budget,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 5, max_context_types: 1 << 14, budget: Budget::default() }
    }
}

/// Bit layout of context types: the triple `(q, ℓ, q')` is bit
/// `q·(P·Q) + ℓ·Q + q'`, where `ℓ` indexes the sorted distinct priorities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleLayout {
    states: usize,
    levels: Vec<u32>,
}

impl TripleLayout {
    pub fn new(a: &TreeAutomaton) -> Result<TripleLayout> {
        let layout = TripleLayout { states: a.num_states(), levels: a.priority_values() };
        if layout.states * layout.states * layout.levels.len() > 128 {
            return Err(AlgebraError::TooLarge(format!(
                "{} states with {} priorities do not fit a 128-bit triple set",
                layout.states,
                layout.levels.len()
            )));
        }
        Ok(layout)
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    fn level_of(&self, p: u32) -> usize {
        self.levels.binary_search(&p).expect("priority of the automaton")
    }

    fn bit(&self, q: State, level: usize, r: State) -> u128 {
        1u128 << (q * self.levels.len() * self.states + level * self.states + r)
    }

    /// The triples `(q, priority, q')` of a set, in bit order.
    pub fn triples(&self, set: u128) -> Vec<(State, u32, State)> {
        let p = self.levels.len();
        (0..128)
            .filter(|&i| set >> i & 1 == 1)
            .map(|i| (i / (p * self.states), self.levels[i / self.states % p], i % self.states))
            .collect()
    }

    fn indexed(&self, set: u128) -> impl Iterator<Item = (State, usize, State)> + '_ {
        let p = self.levels.len();
        (0..128).filter(move |&i| set >> i & 1 == 1).map(move |i| (i / (p * self.states), i / self.states % p, i % self.states))
    }

    /// One-step context with the port on the left (`left = true`) or right,
    /// the other child carrying a tree of type `h`.
    pub fn inject(&self, a: &TreeAutomaton, letter: usize, h: u64, left: bool) -> u128 {
        let mut set = 0;
        for t in a.transitions().iter().filter(|t| t.letter == letter) {
            let (port, other) = if left { (t.left, t.right) } else { (t.right, t.left) };
            if h >> other & 1 == 1 {
                set |= self.bit(t.state, self.level_of(a.priority(t.state)), port);
            }
        }
        set
    }

    /// Relational join with the larger priority.
    pub fn compose(&self, u: u128, v: u128) -> u128 {
        let mut set = 0;
        for (q, l, r) in self.indexed(u) {
            for (r2, l2, s) in self.indexed(v) {
                if r2 == r {
                    set |= self.bit(q, l.max(l2), s);
                }
            }
        }
        set
    }

    pub fn act(&self, v: u128, h: u64) -> u64 {
        self.indexed(v).filter(|&(_, _, r)| h >> r & 1 == 1).fold(0, |m, (q, _, _)| m | 1 << q)
    }

    /// `v^∞`: the states reaching, through the idempotent power `e` of `v`, a
    /// state with an even loop in `e`.
    pub fn omega(&self, v: u128) -> u64 {
        let mut e = v;
        loop {
            let ee = self.compose(e, e);
            if ee == e {
                break;
            }
            e = self.compose(e, v);
        }
        let good: u64 = self
            .indexed(e)
            .filter(|&(q, l, r)| q == r && self.levels[l] % 2 == 0)
            .fold(0, |m, (q, _, _)| m | 1 << q);
        self.act(e, good)
    }
}

/// The stage-one algebra of an automaton together with the meaning of every
/// element: tree types are state sets, context types are triple sets.
#[derive(Clone, Debug)]
pub struct StageOne {
    pub automaton: TreeAutomaton,
    pub algebra: ThinAlgebra,
    pub layout: TripleLayout,
    pub tree_types: Vec<u64>,
    pub classes: Vec<TreeAutomaton>,
    pub context_types: Vec<u128>,
}

impl StageOne {
    /// Index of a tree type given as a state set.
    pub fn tree_index(&self, mask: u64) -> Option<usize> {
        self.tree_types.binary_search(&mask).ok()
    }

    pub fn context_index(&self, set: u128) -> Option<usize> {
        self.context_types.iter().position(|&c| c == set)
    }

    /// The stage-one type of a regular tree.
    pub fn type_of(&self, t: &RegularTree) -> Result<usize> {
        let mask = evaluate_type(&self.automaton, t)?;
        self.tree_index(mask)
            .ok_or_else(|| AlgebraError::Inconsistent(format!("type {mask:#b} of a tree is not realized")))
    }

    /// `|H| ≤ 2^|Q|` and `|V| ≤ 2^(|Q|²·#priorities)`.
    pub fn within_size_bounds(&self) -> bool {
        let q = self.automaton.num_states();
        let bits = q * q * self.layout.levels().len();
        let v_ok = bits >= 128 || (self.context_types.len() as u128) <= 1u128 << bits;
        (self.tree_types.len() as u128) <= 1u128 << q && v_ok
    }

    pub fn dump(&self) -> String {
        let mut s = self.algebra.dump(self.automaton.alphabet().names());
        for (i, &m) in self.tree_types.iter().enumerate() {
            let states: Vec<String> = (0..64).filter(|q| m >> q & 1 == 1).map(|q| q.to_string()).collect();
            writeln!(s, "tree_type {i} {{{}}}", states.join(",")).unwrap();
        }
        for (i, &c) in self.context_types.iter().enumerate() {
            let ts: Vec<String> = self.layout.triples(c).iter().map(|(q, l, r)| format!("({q},{l},{r})")).collect();
            writeln!(s, "context_type {i} {{{}}}", ts.join(",")).unwrap();
        }
        s
    }
}

/// `{q : A accepts t from q}` as a bitmask.
pub fn evaluate_type(a: &TreeAutomaton, t: &RegularTree) -> Result<u64> {
    let acc = accepting_states(a, t)?;
    Ok(acc.iter().enumerate().filter(|(_, &x)| x).fold(0, |m, (q, _)| m | 1 << q))
}

/// The realized tree types with exact class automata, in increasing mask order.
pub fn realized_tree_types(a: &TreeAutomaton, limits: &Limits) -> Result<Vec<(u64, TreeAutomaton)>> {
    if a.num_states() > limits.max_states {
        return Err(AlgebraError::TooLarge(format!("{} states, cap is {}", a.num_states(), limits.max_states)));
    }
    Ok(realized_types(a, limits.budget)?)
}

/// Closure of the one-step contexts over the realized tree types under
/// composition, in discovery order (generators first).
pub fn realized_context_types(a: &TreeAutomaton, layout: &TripleLayout, tree_types: &[u64], limits: &Limits) -> Result<Vec<u128>> {
    let mut gens = Vec::new();
    for letter in a.alphabet().letters() {
        for &h in tree_types {
            for left in [true, false] {
                let g = layout.inject(a, letter, h, left);
                if !gens.contains(&g) {
                    gens.push(g);
                }
            }
        }
    }
    let mut out = gens.clone();
    let mut seen: HashMap<u128, usize> = out.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut i = 0;
    while i < out.len() {
        for &g in &gens {
            let x = layout.compose(out[i], g);
            if !seen.contains_key(&x) {
                if out.len() >= limits.max_context_types {
                    return Err(AlgebraError::TooLarge(format!("more than {} context types", limits.max_context_types)));
                }
                seen.insert(x, out.len());
                out.push(x);
            }
        }
        i += 1;
        limits.budget.deadline.map_or(Ok(()), |d| {
            if std::time::Instant::now() >= d {
                Err(AlgebraError::Automata(wadge_automata::AutomataError::Deadline))
            } else {
                Ok(())
            }
        })?;
    }
    Ok(out)
}

/// Builds the stage-one algebra of `a`.
pub fn stage_one_algebra(a: &TreeAutomaton, limits: &Limits) -> Result<StageOne> {
    let layout = TripleLayout::new(a)?;
    let (tree_types, classes): (Vec<u64>, Vec<TreeAutomaton>) = realized_tree_types(a, limits)?.into_iter().unzip();
    let context_types = realized_context_types(a, &layout, &tree_types, limits)?;
    let h_index: HashMap<u64, usize> = tree_types.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let v_index: HashMap<u128, usize> = context_types.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let h_of = |m: u64| {
        h_index.get(&m).copied().ok_or_else(|| AlgebraError::Inconsistent(format!("tree type {m:#b} escapes the realized carrier")))
    };
    let v_of = |c: u128| {
        v_index.get(&c).copied().ok_or_else(|| AlgebraError::Inconsistent(format!("context type {c:#x} escapes the realized carrier")))
    };
    let mut compose = Vec::new();
    let mut act = Vec::new();
    let mut omega = Vec::new();
    for &u in &context_types {
        compose.push(context_types.iter().map(|&v| v_of(layout.compose(u, v))).collect::<Result<Vec<_>>>()?);
        act.push(tree_types.iter().map(|&h| h_of(layout.act(u, h))).collect::<Result<Vec<_>>>()?);
        omega.push(h_of(layout.omega(u))?);
    }
    let injections = |left: bool| -> Result<Vec<Vec<usize>>> {
        a.alphabet().letters().map(|l| tree_types.iter().map(|&h| v_of(layout.inject(a, l, h, left))).collect()).collect()
    };
    let tables = Tables {
        compose,
        act,
        omega,
        inject_left: injections(true)?,
        inject_right: injections(false)?,
        accepting: tree_types.iter().map(|&h| h >> a.initial() & 1 == 1).collect(),
    };
    let stage = StageOne { automaton: a.clone(), algebra: ThinAlgebra::new(tables)?, layout, tree_types, classes, context_types };
    if !stage.within_size_bounds() {
        return Err(AlgebraError::Inconsistent("carrier sizes exceed the exponential bounds".into()));
    }
    Ok(stage)
}
