//! Language operations on parity tree automata.
//!
//! Emptiness and membership are parity games: Even proposes transitions, Odd
//! picks a direction, and each position carries the priority of its state.
//!
//! The closure of `L(A)` in the prefix topology is accepted by `A` restricted
//! to productive states with every priority set to 0. A tree is in the closure
//! iff each of its finite prefixes extends to a tree of `L(A)`; by König's
//! lemma applied to the finitely branching choices of productive transitions,
//! this holds iff the tree carries an infinite run through productive states.

use std::collections::HashMap;

use wadge_game::{solve, ArenaBuilder, Player};
use wadge_model::{Alphabet, Letter, ModelError, RegularTree, State, Transition, TreeAutomaton};

use crate::monitor::ConditionMonitor;

struct EmptinessGame {
    arena: wadge_game::GameArena,
    /// letter carried by each edge of the state vertices
    edge_letter: Vec<Vec<Letter>>,
    /// children of each move vertex
    pair: HashMap<usize, (State, State)>,
}

fn emptiness_game(a: &TreeAutomaton) -> EmptinessGame {
    let n = a.num_states();
    let mut b = ArenaBuilder::new();
    for q in 0..n {
        b.add_vertex(Player::Even, a.priority(q));
    }
    let mut moves: HashMap<(State, State), usize> = HashMap::new();
    let mut pair = HashMap::new();
    let mut edge_letter = vec![Vec::new(); n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for q in 0..n {
        for c in a.alphabet().letters() {
            for &(l, r) in a.successors(q, c) {
                let m = *moves.entry((l, r)).or_insert_with(|| {
                    let m = b.add_vertex(Player::Odd, 0);
                    pair.insert(m, (l, r));
                    edges.push((m, l));
                    edges.push((m, r));
                    m
                });
                if seen.insert((q, m)) {
                    edges.push((q, m));
                    edge_letter[q].push(c);
                }
            }
        }
    }
    // state edges must be added in the order recorded in edge_letter
    edges.sort_by_key(|&(v, _)| v);
    for (v, w) in edges {
        b.add_edge(v, w);
    }
    EmptinessGame { arena: b.build(), edge_letter, pair }
}

/// States from which the automaton accepts some tree.
pub fn productive_states(a: &TreeAutomaton) -> Vec<bool> {
    let g = emptiness_game(a);
    let sol = solve(&g.arena);
    (0..a.num_states()).map(|q| sol.wins(q) == Player::Even).collect()
}

/// Emptiness check; a nonempty language comes with an accepted regular tree
/// read off Even's positional strategy.
pub fn is_empty(a: &TreeAutomaton) -> (bool, Option<RegularTree>) {
    let g = emptiness_game(a);
    let sol = solve(&g.arena);
    let q0 = a.initial();
    if sol.wins(q0) != Player::Even {
        return (true, None);
    }
    let mut id: HashMap<State, usize> = HashMap::new();
    let mut order = vec![q0];
    id.insert(q0, 0);
    let mut nodes = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        let e = sol.strategy[q].expect("winning strategy at a won state");
        let m = g.arena.edges(q)[e];
        let letter = g.edge_letter[q][e];
        let (l, r) = g.pair[&m];
        let mut child = |s: State| {
            *id.entry(s).or_insert_with(|| {
                order.push(s);
                order.len() - 1
            })
        };
        let (li, ri) = (child(l), child(r));
        nodes.push((letter, li, ri));
    }
    let t = RegularTree::new(a.alphabet().clone(), nodes, 0).expect("witness tree");
    assert!(accepts_regular_tree(a, &t).unwrap_or(false), "emptiness witness rejected by its automaton");
    (false, Some(t))
}

/// For every state `q` (first index) and tree vertex `v`, whether the
/// automaton accepts the subtree at `v` from `q`.
pub fn acceptance_table(a: &TreeAutomaton, t: &RegularTree) -> Result<Vec<Vec<bool>>, ModelError> {
    if a.alphabet() != t.alphabet() {
        return Err(ModelError::AlphabetMismatch);
    }
    let n = a.num_states();
    let m = t.len();
    let mut b = ArenaBuilder::new();
    for q in 0..n {
        for _ in 0..m {
            b.add_vertex(Player::Even, a.priority(q));
        }
    }
    let vid = |q: State, v: usize| q * m + v;
    let mut moves: HashMap<(State, State, usize), usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n * m];
    let mut move_edges = Vec::new();
    for q in 0..n {
        for v in 0..m {
            for &(l, r) in a.successors(q, t.label(v)) {
                let mv = *moves.entry((l, r, v)).or_insert_with(|| {
                    let mv = b.add_vertex(Player::Odd, 0);
                    move_edges.push((mv, vid(l, t.left(v)), vid(r, t.right(v))));
                    mv
                });
                if !out[vid(q, v)].contains(&mv) {
                    out[vid(q, v)].push(mv);
                }
            }
        }
    }
    for (x, succ) in out.into_iter().enumerate() {
        for w in succ {
            b.add_edge(x, w);
        }
    }
    for (mv, l, r) in move_edges {
        b.add_edge(mv, l);
        b.add_edge(mv, r);
    }
    let sol = solve(&b.build());
    Ok((0..n).map(|q| (0..m).map(|v| sol.wins(vid(q, v)) == Player::Even).collect()).collect())
}

/// Whether the unfolding of `t` belongs to `L(a)`.
pub fn accepts_regular_tree(a: &TreeAutomaton, t: &RegularTree) -> Result<bool, ModelError> {
    Ok(acceptance_table(a, t)?[a.initial()][t.root()])
}

/// Per state: does the automaton accept the whole tree `t` from that state.
pub fn accepting_states(a: &TreeAutomaton, t: &RegularTree) -> Result<Vec<bool>, ModelError> {
    Ok(acceptance_table(a, t)?.into_iter().map(|row| row[t.root()]).collect())
}

/// Restriction to productive states (language unchanged), reachable part only.
pub fn trim(a: &TreeAutomaton) -> TreeAutomaton {
    restrict(a, &productive_states(a))
}

/// Restriction to the states marked in `keep`, reachable part only. Keeping
/// every productive state leaves the language unchanged.
pub fn restrict(a: &TreeAutomaton, prod: &[bool]) -> TreeAutomaton {
    if !prod[a.initial()] {
        return TreeAutomaton::empty(a.alphabet());
    }
    let tr: Vec<Transition> =
        a.transitions().iter().copied().filter(|t| prod[t.state] && prod[t.left] && prod[t.right]).collect();
    TreeAutomaton::new(a.alphabet().clone(), a.priorities().to_vec(), a.initial(), tr)
        .expect("restriction")
        .trim_reachable()
}

/// Topological closure: productive part with all priorities 0.
pub fn closure(a: &TreeAutomaton) -> TreeAutomaton {
    let prod = productive_states(a);
    if !prod[a.initial()] {
        return TreeAutomaton::empty(a.alphabet());
    }
    let tr: Vec<Transition> =
        a.transitions().iter().copied().filter(|t| prod[t.state] && prod[t.left] && prod[t.right]).collect();
    TreeAutomaton::new(a.alphabet().clone(), vec![0; a.num_states()], a.initial(), tr)
        .expect("closure")
        .trim_reachable()
}

/// Disjoint union plus a fresh initial state copying both initial transition
/// sets; `|Q_A| + |Q_B| + 1` states.
pub fn union(a: &TreeAutomaton, b: &TreeAutomaton) -> Result<TreeAutomaton, ModelError> {
    if a.alphabet() != b.alphabet() {
        return Err(ModelError::AlphabetMismatch);
    }
    let (oa, ob) = (1, 1 + a.num_states());
    let mut priority = vec![0];
    priority.extend_from_slice(a.priorities());
    priority.extend_from_slice(b.priorities());
    let shift = |t: &Transition, o: usize| Transition { state: t.state + o, letter: t.letter, left: t.left + o, right: t.right + o };
    let mut tr: Vec<Transition> = Vec::new();
    for (aut, o) in [(a, oa), (b, ob)] {
        for t in aut.transitions().iter().filter(|t| t.state == aut.initial()) {
            tr.push(Transition { state: 0, ..shift(t, o) });
        }
    }
    tr.extend(a.transitions().iter().map(|t| shift(t, oa)));
    tr.extend(b.transitions().iter().map(|t| shift(t, ob)));
    TreeAutomaton::new(a.alphabet().clone(), priority, 0, tr)
}

fn all_even(a: &TreeAutomaton) -> bool {
    a.priorities().iter().all(|p| p % 2 == 0)
}

/// Product automaton; the combined acceptance condition is produced by a
/// [`ConditionMonitor`] carried in the state. When one side has only even
/// priorities its condition is trivial and the other side's priorities are
/// used directly.
pub fn intersection(a: &TreeAutomaton, b: &TreeAutomaton) -> Result<TreeAutomaton, ModelError> {
    if a.alphabet() != b.alphabet() {
        return Err(ModelError::AlphabetMismatch);
    }
    let mut mon = ConditionMonitor::new(&a.priority_values(), &b.priority_values());
    let (ea, eb) = (all_even(a), all_even(b));
    let mut id: HashMap<(State, State, usize), usize> = HashMap::new();
    let mut order: Vec<(State, State, usize)> = Vec::new();
    let mut priority = Vec::new();
    let mut tr = Vec::new();
    let start = (a.initial(), b.initial(), mon.initial());
    id.insert(start, 0);
    order.push(start);
    let mut i = 0;
    while i < order.len() {
        let (qa, qb, m) = order[i];
        let (pa, pb) = (a.priority(qa), b.priority(qb));
        let (p, next) = if eb {
            (pa, m)
        } else if ea {
            (pb, m)
        } else {
            mon.step(m, pa, pb)
        };
        priority.push(p);
        for c in a.alphabet().letters() {
            for &(la, ra) in a.successors(qa, c) {
                for &(lb, rb) in b.successors(qb, c) {
                    let mut get = |s: (State, State, usize)| {
                        *id.entry(s).or_insert_with(|| {
                            order.push(s);
                            order.len() - 1
                        })
                    };
                    let l = get((la, lb, next));
                    let r = get((ra, rb, next));
                    tr.push(Transition { state: i, letter: c, left: l, right: r });
                }
            }
        }
        i += 1;
    }
    TreeAutomaton::new(a.alphabet().clone(), priority, 0, tr)
}

/// Quotient by the coarsest forward bisimulation that respects priorities.
/// Bisimilar states accept the same trees, so the language is unchanged.
pub fn reduce(a: &TreeAutomaton) -> TreeAutomaton {
    let n = a.num_states();
    let mut class: Vec<usize> = {
        let vals = a.priority_values();
        (0..n).map(|q| vals.binary_search(&a.priority(q)).unwrap()).collect()
    };
    let mut count = class.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut sig_id: HashMap<(usize, Vec<(Letter, usize, usize)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let mut sig: Vec<(Letter, usize, usize)> = Vec::new();
            for c in a.alphabet().letters() {
                for &(l, r) in a.successors(q, c) {
                    sig.push((c, class[l], class[r]));
                }
            }
            sig.sort_unstable();
            sig.dedup();
            let len = sig_id.len();
            next[q] = *sig_id.entry((class[q], sig)).or_insert(len);
        }
        let new_count = sig_id.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut priority = vec![0; count];
    for q in 0..n {
        priority[class[q]] = a.priority(q);
    }
    let tr: Vec<Transition> = a
        .transitions()
        .iter()
        .map(|t| Transition { state: class[t.state], letter: t.letter, left: class[t.left], right: class[t.right] })
        .collect();
    TreeAutomaton::new(a.alphabet().clone(), priority, class[a.initial()], tr).expect("quotient").trim_reachable()
}

/// `p` is at least as good as `q` for max-even acceptance: replacing every
/// priority of a sequence by a better one preserves acceptance.
pub(crate) fn no_worse(p: u32, q: u32) -> bool {
    if q % 2 == 0 {
        p % 2 == 0 && p >= q
    } else {
        p % 2 == 0 || p <= q
    }
}

/// Largest automaton on which simulation reduction runs.
const SIMULATION_LIMIT: usize = 1500;

/// Direct simulation up to priority improvement. `sim[x][y]` implies that
/// every run from `x` is matched by a run from `y` whose priorities are no
/// worse vertex by vertex, hence `L(x) ⊆ L(y)`.
fn simulation(a: &TreeAutomaton) -> Vec<Vec<bool>> {
    let n = a.num_states();
    let mut sim: Vec<Vec<bool>> =
        (0..n).map(|x| (0..n).map(|y| no_worse(a.priority(y), a.priority(x))).collect()).collect();
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if x == y || !sim[x][y] {
                    continue;
                }
                let ok = a.alphabet().letters().all(|c| {
                    let ty = a.successors(y, c);
                    a.successors(x, c).iter().all(|&(l, r)| ty.iter().any(|&(l2, r2)| sim[l][l2] && sim[r][r2]))
                });
                if !ok {
                    sim[x][y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return sim;
        }
    }
}

/// Removes transitions dominated under simulation and merges mutually
/// simulating states. The language is unchanged.
pub(crate) fn simplify(a: &TreeAutomaton) -> TreeAutomaton {
    let mut a = reduce(a);
    while a.num_states() <= SIMULATION_LIMIT {
        let sim = simulation(&a);
        let n = a.num_states();
        let mut rep = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            if rep[x] == usize::MAX {
                for y in x..n {
                    if rep[y] == usize::MAX && sim[x][y] && sim[y][x] {
                        rep[y] = count;
                    }
                }
                count += 1;
            }
        }
        let mut priority = vec![0; count];
        for q in 0..n {
            priority[rep[q]] = a.priority(q);
        }
        let mut tr: Vec<Transition> = Vec::new();
        let mut pruned = false;
        let mut done = vec![false; count];
        for q in 0..n {
            if std::mem::replace(&mut done[rep[q]], true) {
                continue;
            }
            for c in a.alphabet().letters() {
                let ts = a.successors(q, c);
                let covers = |i: usize, j: usize| sim[ts[i].0][ts[j].0] && sim[ts[i].1][ts[j].1];
                for i in 0..ts.len() {
                    if (0..ts.len()).any(|j| j != i && covers(i, j) && (!covers(j, i) || j < i)) {
                        pruned = true;
                        continue;
                    }
                    tr.push(Transition { state: rep[q], letter: c, left: rep[ts[i].0], right: rep[ts[i].1] });
                }
            }
        }
        if count == n && !pruned {
            break;
        }
        tr.sort_unstable_by_key(|t| (t.state, t.letter, t.left, t.right));
        tr.dedup();
        a = reduce(&TreeAutomaton::new(a.alphabet().clone(), priority, rep[a.initial()], tr).expect("quotient"));
    }
    a
}

/// Automaton for the basic open set of trees extending `prefix`.
pub fn prefix_automaton(alphabet: &Alphabet, prefix: &wadge_model::FinitePrefix) -> TreeAutomaton {
    use wadge_model::Dir;
    // state 0 is the unconstrained sink; prefix nodes follow
    let nodes: Vec<&Vec<Dir>> = prefix.iter().map(|(k, _)| k).collect();
    let idx = |p: &Vec<Dir>| nodes.iter().position(|k| *k == p).map(|i| i + 1);
    let mut tr: Vec<Transition> = alphabet.letters().map(|c| Transition { state: 0, letter: c, left: 0, right: 0 }).collect();
    for (i, node) in nodes.iter().enumerate() {
        let child = |d: Dir| {
            let mut p = (*node).clone();
            p.push(d);
            idx(&p).unwrap_or(0)
        };
        let c = prefix.get(node).unwrap();
        tr.push(Transition { state: i + 1, letter: c, left: child(Dir::L), right: child(Dir::R) });
    }
    let init = idx(&Vec::new()).unwrap_or(0);
    TreeAutomaton::new(alphabet.clone(), vec![0; nodes.len() + 1], init, tr).expect("prefix automaton")
}

/// Smallest priorities that keep, on every strongly connected set of states,
/// the parity of the largest priority. The set of states a branch of a run
/// visits infinitely often is strongly connected, so acceptance is unchanged.
pub fn minimize_priorities(a: &TreeAutomaton) -> TreeAutomaton {
    let n = a.num_states();
    let mut adj = vec![Vec::new(); n];
    for t in a.transitions() {
        adj[t.state].push(t.left);
        adj[t.state].push(t.right);
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
        row.dedup();
    }
    let mut priority = vec![0; n];
    let all: Vec<usize> = (0..n).collect();
    relabel(a, &adj, &all, &mut priority);
    TreeAutomaton::new(a.alphabet().clone(), priority, a.initial(), a.transitions().to_vec()).expect("same shape")
}

/// Assigns priorities to `nodes`; returns the largest assigned value inside a
/// cycle, if any.
fn relabel(a: &TreeAutomaton, adj: &[Vec<usize>], nodes: &[usize], out: &mut [u32]) -> Option<u32> {
    let mut top = None;
    for comp in sccs(adj, nodes) {
        let cyclic = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
        if !cyclic {
            out[comp[0]] = 0;
            continue;
        }
        let m = comp.iter().map(|&q| a.priority(q)).max().unwrap();
        let rest: Vec<usize> = comp.iter().copied().filter(|&q| a.priority(q) != m).collect();
        let inner = relabel(a, adj, &rest, out);
        let value = match inner {
            None => m % 2,
            Some(k) if k % 2 == m % 2 => k,
            Some(k) => k + 1,
        };
        for &q in &comp {
            if a.priority(q) == m {
                out[q] = value;
            }
        }
        top = top.max(Some(value));
    }
    top
}

/// Strongly connected components of the subgraph induced by `nodes`.
fn sccs(adj: &[Vec<usize>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut inside = vec![false; n];
    for &q in nodes {
        inside[q] = true;
    }
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for &root in nodes {
        if index[root] != usize::MAX {
            continue;
        }
        // iterative Tarjan: frames of (vertex, next edge position)
        let mut frames = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if !inside[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(u, _)) = frames.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(comp);
            }
        }
    }
    out
}

/// Relabels priorities onto a dense range with the same order and parities.
pub fn compress_priorities(a: &TreeAutomaton) -> TreeAutomaton {
    let vals = a.priority_values();
    let mut map = HashMap::new();
    let mut next = 0u32;
    for v in vals {
        if next % 2 != v % 2 {
            next += 1;
        }
        map.insert(v, next);
    }
    let priority = a.priorities().iter().map(|p| map[p]).collect();
    TreeAutomaton::new(a.alphabet().clone(), priority, a.initial(), a.transitions().to_vec()).expect("same shape")
}
