use std::collections::HashSet;
use std::fmt::Write as _;

use crate::{Alphabet, Letter, ModelError};

pub type State = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub state: State,
    pub letter: Letter,
    pub left: State,
    pub right: State,
}

/// Nondeterministic parity tree automaton with state-based priorities.
///
/// Transitions are kept as a duplicate-free list in insertion order, which is
/// what serialization reproduces; a per `(state, letter)` index is derived.
#[derive(Clone, Debug)]
pub struct TreeAutomaton {
    alphabet: Alphabet,
    priority: Vec<u32>,
    initial: State,
    transitions: Vec<Transition>,
    table: Vec<Vec<(State, State)>>,
}

impl PartialEq for TreeAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.priority == other.priority
            && self.initial == other.initial
            && self.transitions == other.transitions
    }
}

impl Eq for TreeAutomaton {}

impl TreeAutomaton {
    pub fn new(
        alphabet: Alphabet,
        priority: Vec<u32>,
        initial: State,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, ModelError> {
        let n = priority.len();
        if n == 0 {
            return Err(ModelError::Automaton("no states".into()));
        }
        if initial >= n {
            return Err(ModelError::Automaton(format!("initial state {initial} out of range")));
        }
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for t in transitions {
            if t.state >= n || t.left >= n || t.right >= n {
                return Err(ModelError::Automaton(format!("transition {t:?} out of range")));
            }
            if t.letter >= alphabet.len() {
                return Err(ModelError::Automaton(format!("transition {t:?} has bad letter")));
            }
            if seen.insert(t) {
                list.push(t);
            }
        }
        let k = alphabet.len();
        let mut table = vec![Vec::new(); n * k];
        for t in &list {
            table[t.state * k + t.letter].push((t.left, t.right));
        }
        Ok(TreeAutomaton { alphabet, priority, initial, transitions: list, table })
    }

    /// One state, every letter loops, priority 0.
    pub fn universal(alphabet: &Alphabet) -> Self {
        let tr = alphabet.letters().map(|a| Transition { state: 0, letter: a, left: 0, right: 0 });
        TreeAutomaton::new(alphabet.clone(), vec![0], 0, tr).expect("universal automaton")
    }

    /// One state without transitions.
    pub fn empty(alphabet: &Alphabet) -> Self {
        TreeAutomaton::new(alphabet.clone(), vec![0], 0, Vec::new()).expect("empty automaton")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.priority.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn priority(&self, q: State) -> u32 {
        self.priority[q]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    /// Distinct priorities in increasing order.
    pub fn priority_values(&self) -> Vec<u32> {
        let mut v = self.priority.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_priority(&self) -> u32 {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn successors(&self, q: State, a: Letter) -> &[(State, State)] {
        &self.table[q * self.alphabet.len() + a]
    }

    /// Same automaton started from another state.
    pub fn with_initial(&self, q: State) -> Self {
        let mut a = self.clone();
        assert!(q < self.num_states());
        a.initial = q;
        a
    }

    /// Keeps the states reachable from the initial state, renumbered in
    /// breadth-first order.
    pub fn trim_reachable(&self) -> Self {
        let n = self.num_states();
        let k = self.alphabet.len();
        let mut id = vec![usize::MAX; n];
        let mut order = vec![self.initial];
        id[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for a in 0..k {
                for &(l, r) in self.successors(q, a) {
                    for s in [l, r] {
                        if id[s] == usize::MAX {
                            id[s] = order.len();
                            order.push(s);
                        }
                    }
                }
            }
        }
        let priority = order.iter().map(|&q| self.priority[q]).collect();
        let trans = self
            .transitions
            .iter()
            .filter(|t| id[t.state] != usize::MAX)
            .map(|t| Transition { state: id[t.state], letter: t.letter, left: id[t.left], right: id[t.right] });
        TreeAutomaton::new(self.alphabet.clone(), priority, 0, trans).expect("trimmed automaton")
    }

    /// Disjoint union of automata over one alphabet; returns the union (initial
    /// state = initial of the first) and the state offset of each part.
    pub fn disjoint_union(parts: &[&TreeAutomaton]) -> Result<(TreeAutomaton, Vec<usize>), ModelError> {
        let alphabet = parts[0].alphabet.clone();
        let mut priority = Vec::new();
        let mut trans = Vec::new();
        let mut offsets = Vec::new();
        for p in parts {
            if p.alphabet != alphabet {
                return Err(ModelError::AlphabetMismatch);
            }
            let off = priority.len();
            offsets.push(off);
            priority.extend_from_slice(&p.priority);
            trans.extend(p.transitions.iter().map(|t| Transition {
                state: t.state + off,
                letter: t.letter,
                left: t.left + off,
                right: t.right + off,
            }));
        }
        let init = offsets[0] + parts[0].initial;
        Ok((TreeAutomaton::new(alphabet, priority, init, trans)?, offsets))
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut states: Option<usize> = None;
        let mut initial: Option<(usize, String)> = None;
        let mut prio_lines: Vec<(usize, String, String)> = Vec::new();
        let mut trans_lines: Vec<(usize, Vec<String>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, rest)) = line.split_once(':') else {
                return Err(ModelError::Syntax { line: line_no, msg: format!("expected `key: value`, got {line:?}") });
            };
            let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            let syntax = |msg: &str| ModelError::Syntax { line: line_no, msg: msg.to_string() };
            match key.trim() {
                "alphabet" => {
                    if alphabet.is_some() {
                        return Err(syntax("duplicate alphabet line"));
                    }
                    alphabet = Some(Alphabet::new(&words).map_err(|e| syntax(&e.to_string()))?);
                }
                "states" => {
                    if words.len() != 1 {
                        return Err(syntax("`states` takes one number"));
                    }
                    states = Some(words[0].parse().map_err(|_| syntax("bad state count"))?);
                }
                "initial" => {
                    if words.len() != 1 {
                        return Err(syntax("`initial` takes one state"));
                    }
                    initial = Some((line_no, words[0].clone()));
                }
                "priority" => {
                    if words.len() != 2 {
                        return Err(syntax("`priority` takes a state and a priority"));
                    }
                    prio_lines.push((line_no, words[0].clone(), words[1].clone()));
                }
                "trans" => {
                    if words.len() != 4 {
                        return Err(syntax("`trans` takes state letter left right"));
                    }
                    trans_lines.push((line_no, words));
                }
                other => return Err(syntax(&format!("unknown key {other:?}"))),
            }
        }
        let alphabet = alphabet.ok_or(ModelError::MissingSection("alphabet"))?;
        let n = states.ok_or(ModelError::MissingSection("states"))?;
        if n == 0 {
            return Err(ModelError::Automaton("no states".into()));
        }
        let state = |line: usize, s: &str| -> Result<State, ModelError> {
            match s.parse::<usize>() {
                Ok(q) if q < n => Ok(q),
                _ => Err(ModelError::UnknownState { line, state: s.to_string() }),
            }
        };
        let (iline, iname) = initial.ok_or(ModelError::MissingSection("initial"))?;
        let init = state(iline, &iname)?;
        let mut prio: Vec<Option<u32>> = vec![None; n];
        for (line, q, p) in &prio_lines {
            let q = state(*line, q)?;
            let p: u32 = p.parse().map_err(|_| ModelError::Syntax { line: *line, msg: "bad priority".into() })?;
            if prio[q].is_some() {
                return Err(ModelError::Syntax { line: *line, msg: format!("priority of state {q} given twice") });
            }
            prio[q] = Some(p);
        }
        let mut priority = Vec::with_capacity(n);
        for (q, p) in prio.into_iter().enumerate() {
            priority.push(p.ok_or(ModelError::MissingPriority(q))?);
        }
        // normalize the base of the priority range to 0 or 1
        let min = priority.iter().copied().min().unwrap_or(0);
        let shift = min - min % 2;
        for p in &mut priority {
            *p -= shift;
        }
        let mut trans = Vec::with_capacity(trans_lines.len());
        for (line, w) in &trans_lines {
            let letter = alphabet
                .index(&w[1])
                .ok_or_else(|| ModelError::UnknownLetter { line: *line, letter: w[1].clone() })?;
            trans.push(Transition { state: state(*line, &w[0])?, letter, left: state(*line, &w[2])?, right: state(*line, &w[3])? });
        }
        TreeAutomaton::new(alphabet, priority, init, trans)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        writeln!(s, "alphabet: {}", self.alphabet).unwrap();
        writeln!(s, "states: {}", self.num_states()).unwrap();
        writeln!(s, "initial: {}", self.initial).unwrap();
        for (q, p) in self.priority.iter().enumerate() {
            writeln!(s, "priority: {q} {p}").unwrap();
        }
        for t in &self.transitions {
            writeln!(s, "trans: {} {} {} {}", t.state, self.alphabet.name(t.letter), t.left, t.right).unwrap();
        }
        s
    }
}
