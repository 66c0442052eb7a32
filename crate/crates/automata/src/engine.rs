//! Tree automata for the trees rejected from a set of states.
//!
//! A tree is rejected by `A` from every state of `N` iff the path-picking
//! player wins the acceptance games from all of them, and positional
//! strategies suffice: at every node, each transition available to a state of
//! `N` is answered by a direction. Once these annotations are guessed, the
//! tree is good iff no branch carries an accepting thread of `A` consistent
//! with them.
//!
//! Accepting threads along one branch are detected by a nondeterministic
//! parity word automaton whose letters are the thread relations of one step.
//! It is determinized with Safra trees, and the resulting deterministic
//! automaton runs down every branch with its priority shifted by one, so that
//! the tree automaton accepts iff every branch is rejected.
//!
//! The base automaton is first put in edge form, where each edge carries the
//! priority of its target, and reduced by bisimulation there; states that
//! differ only in their own priority merge. States of the construction are
//! Safra trees and priorities again sit on the edges. The edge automaton is reduced by bisimulation before it is expanded
//! into state-based priorities.

use std::collections::HashMap;
use std::time::Instant;

use wadge_model::{Letter, State, Transition, TreeAutomaton};

use crate::bits::Bits;
use crate::error::{AutomataError, Result};
use crate::safra::{parity_bound, step, NbaView, SafraTree};
use crate::ops::no_worse;

/// Limits applied to determinization-based constructions.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_states: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 1_000_000, deadline: None }
    }
}

impl Budget {
    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub(crate) fn check(&self, states: usize) -> Result<()> {
        if states > self.max_states {
            return Err(AutomataError::ResourceCap { what: "determinized states", limit: self.max_states });
        }
        self.check_time()
    }

    pub(crate) fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(AutomataError::Deadline),
            _ => Ok(()),
        }
    }
}

const MAX_COVER_SIDE: usize = 20;
const MAX_REFUTATIONS: usize = 1 << 16;

/// Successor lists of `(state, edge priority)` over the edge form.
type Relation = Vec<Vec<(State, u32)>>;

/// Successor pair `(left, left priority, right, right priority)`.
type Target = (State, u32, State, u32);

/// Edge `(left, left priority, right, right priority)`.
type Edge = (usize, u32, usize, u32);

/// Edge form of a tree automaton: `moves[q][c]` lists the targets of `q` on `c`.
struct EdgeForm {
    moves: Vec<Vec<Vec<Target>>>,
    max_priority: u32,
}

impl EdgeForm {
    /// Edge form reduced by bisimulation, with the class of every state.
    fn new(a: &TreeAutomaton) -> (EdgeForm, Vec<State>) {
        let k = a.alphabet().len();
        let moves: Vec<Vec<Vec<Target>>> = (0..a.num_states())
            .map(|q| {
                (0..k)
                    .map(|c| a.successors(q, c).iter().map(|&(l, r)| (l, a.priority(l), r, a.priority(r))).collect())
                    .collect()
            })
            .collect();
        let class = edge_bisimulation(&moves);
        let count = class.iter().copied().max().map_or(0, |m| m + 1);
        let mut reduced = vec![Vec::new(); count];
        for (q, &c) in class.iter().enumerate() {
            if reduced[c].is_empty() {
                reduced[c] = moves[q]
                    .iter()
                    .map(|ts| {
                        let mut v: Vec<Target> = ts.iter().map(|&(l, pl, r, pr)| (class[l], pl, class[r], pr)).collect();
                        v.sort_unstable();
                        v.dedup();
                        v
                    })
                    .collect();
            }
        }
        let mut form = EdgeForm { moves: reduced, max_priority: a.max_priority() };
        let mut class = class;
        loop {
            let sim = form.simulation();
            form.prune_dominated(&sim);
            let n = form.len();
            // mutually simulating states have the same language; node 0 stays first
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
            if count == n {
                break;
            }
            let mut merged = vec![Vec::new(); count];
            for x in 0..n {
                if merged[rep[x]].is_empty() {
                    merged[rep[x]] = form.moves[x]
                        .iter()
                        .map(|ts| {
                            let mut v: Vec<Target> = ts.iter().map(|&(l, pl, r, pr)| (rep[l], pl, rep[r], pr)).collect();
                            v.sort_unstable();
                            v.dedup();
                            v
                        })
                        .collect();
                }
            }
            form.moves = merged;
            for c in class.iter_mut() {
                *c = rep[*c];
            }
        }
        (form, class)
    }

    /// Direct simulation: `sim[x][y]` implies that every run from `x` is
    /// matched by a run from `y` with no worse priorities on every branch.
    fn simulation(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut sim = vec![vec![true; n]; n];
        loop {
            let mut changed = false;
            for x in 0..n {
                for y in 0..n {
                    if !sim[x][y] || x == y {
                        continue;
                    }
                    let ok = self.moves[x].iter().zip(&self.moves[y]).all(|(tx, ty)| {
                        tx.iter().all(|&(l, pl, r, pr)| {
                            ty.iter().any(|&(l2, pl2, r2, pr2)| no_worse(pl2, pl) && no_worse(pr2, pr) && sim[l][l2] && sim[r][r2])
                        })
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

    /// Drops transitions dominated by another one of the same state and
    /// letter; the language of every state is unchanged.
    fn prune_dominated(&mut self, sim: &[Vec<bool>]) {
        let covers = |a: &Target, b: &Target| no_worse(b.1, a.1) && no_worse(b.3, a.3) && sim[a.0][b.0] && sim[a.2][b.2];
        for row in self.moves.iter_mut() {
            for ts in row.iter_mut() {
                let keep: Vec<bool> = (0..ts.len())
                    .map(|i| !(0..ts.len()).any(|j| j != i && covers(&ts[i], &ts[j]) && (!covers(&ts[j], &ts[i]) || j < i)))
                    .collect();
                let mut i = 0;
                ts.retain(|_| {
                    i += 1;
                    keep[i - 1]
                });
            }
        }
    }

    fn len(&self) -> usize {
        self.moves.len()
    }
}

struct Builder<'a> {
    base: &'a EdgeForm,
    view: NbaView,
    width: usize,
    bound: u32,
    budget: Budget,
    /// `None` is the node that accepts everything
    trees: Vec<Option<SafraTree>>,
    index: HashMap<SafraTree, usize>,
    step_memo: HashMap<(usize, Relation), (usize, u32)>,
}

impl<'a> Builder<'a> {
    fn new(base: &'a EdgeForm, budget: Budget) -> Self {
        let view = NbaView::new(base.len(), base.max_priority);
        let width = view.width();
        Builder {
            base,
            bound: parity_bound(width),
            width,
            view,
            budget,
            trees: vec![None],
            index: HashMap::new(),
            step_memo: HashMap::new(),
        }
    }

    fn intern(&mut self, tree: Option<SafraTree>) -> Result<usize> {
        let Some(tree) = tree else { return Ok(0) };
        if let Some(&s) = self.index.get(&tree) {
            return Ok(s);
        }
        let s = self.trees.len();
        self.budget.check(s)?;
        self.trees.push(Some(tree.clone()));
        self.index.insert(tree, s);
        Ok(s)
    }

    fn start(&mut self, neg: &[State]) -> Result<usize> {
        let mut root = Bits::new(self.width);
        for &s in neg {
            root.insert(self.view.bottom(s));
        }
        self.intern(SafraTree::root(root))
    }

    fn successor(&mut self, s: usize, rel: Relation) -> Result<(usize, u32)> {
        if let Some(&t) = self.step_memo.get(&(s, rel.clone())) {
            return Ok(t);
        }
        let tree = self.trees[s].as_ref().expect("not the accepting node");
        let view = &self.view;
        let next = step(tree, self.width, |l| view.post(l, &rel));
        let t = match next {
            None => (0, 0),
            Some((tree, p)) => (self.intern(Some(tree))?, self.bound - p + 1),
        };
        self.step_memo.insert((s, rel), t);
        Ok(t)
    }

    fn moves(&mut self, s: usize, c: Letter) -> Result<Vec<Edge>> {
        let Some(tree) = self.trees[s].as_ref() else { return Ok(vec![(0, 0, 0, 0)]) };
        let root = &tree.labels[0];
        let n = self.base.len();
        let active: Vec<State> = (0..n).filter(|&q| root.contains(self.view.bottom(q))).collect();
        let rels = refutations(self.base, &active, c)?;
        let mut out = Vec::with_capacity(rels.len());
        for (left, right) in rels {
            let (l, pl) = self.successor(s, left)?;
            let (r, pr) = self.successor(s, right)?;
            if !out.contains(&(l, pl, r, pr)) {
                out.push((l, pl, r, pr));
            }
        }
        Ok(out)
    }
}

/// Inclusion-minimal thread relations induced by assigning a direction to
/// every transition of the `active` states on letter `c`.
///
/// Two complete families are available. Per source state, a relation must
/// contain for each transition `(q, l, r)` the edge `q -> l` on the left or
/// `q -> r` on the right, so the minimal ones are products of minimal vertex
/// covers of a bipartite graph per state. Alternatively the direction may be
/// fixed per successor pair `(l, r)` independently of the source: in the
/// acceptance game the move to `(l, r)` can go through one vertex shared by
/// all sources, and positional strategies there answer per pair. The smaller
/// family is used.
fn refutations(base: &EdgeForm, active: &[State], c: Letter) -> Result<Vec<(Relation, Relation)>> {
    let n = base.len();
    let mut per_source = Vec::with_capacity(active.len());
    let mut count: usize = 1;
    for &q in active {
        let covers = minimal_covers(&base.moves[q][c])?;
        count = count.saturating_mul(covers.len());
        per_source.push((q, covers));
    }
    if count > 8 {
        if let Some(rels) = per_pair_refutations(base, active, c, count.min(MAX_REFUTATIONS)) {
            return Ok(rels);
        }
    }
    if count > MAX_REFUTATIONS {
        return Err(AutomataError::ResourceCap { what: "refutation choices in one step", limit: MAX_REFUTATIONS });
    }
    let mut acc: Vec<(Relation, Relation)> = vec![(vec![Vec::new(); n], vec![Vec::new(); n])];
    for (q, covers) in per_source {
        let mut next = Vec::with_capacity(acc.len() * covers.len());
        for (l, r) in &acc {
            for (cl, cr) in &covers {
                let (mut l, mut r) = (l.clone(), r.clone());
                l[q] = cl.clone();
                r[q] = cr.clone();
                next.push((l, r));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Minimal relations from per-pair directions, or `None` when there are at
/// least `limit` of them or the search grows too large.
fn per_pair_refutations(base: &EdgeForm, active: &[State], c: Letter, limit: usize) -> Option<Vec<(Relation, Relation)>> {
    let n = base.len();
    let mut pairs: Vec<Target> = active.iter().flat_map(|&q| base.moves[q][c].iter().copied()).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let sources: Vec<Vec<State>> =
        pairs.iter().map(|p| active.iter().copied().filter(|&q| base.moves[q][c].contains(p)).collect()).collect();
    // edges (q, dir, target) are numbered on first use
    let mut edges: Vec<(State, bool, State, u32)> = Vec::new();
    let mut code = |e: (State, bool, State, u32)| match edges.iter().position(|x| *x == e) {
        Some(i) => i,
        None => {
            edges.push(e);
            edges.len() - 1
        }
    };
    let options: Vec<[Vec<usize>; 2]> = pairs
        .iter()
        .zip(&sources)
        .map(|(&(l, pl, r, pr), src)| {
            [src.iter().map(|&q| code((q, false, l, pl))).collect(), src.iter().map(|&q| code((q, true, r, pr))).collect()]
        })
        .collect();
    let width = edges.len();
    let mut found: Vec<Bits> = Vec::new();
    let mut nodes = 0usize;
    let mut stack: Vec<(usize, Bits)> = vec![(0, Bits::new(width))];
    while let Some((i, cur)) = stack.pop() {
        nodes += 1;
        if nodes > 1 << 18 {
            return None;
        }
        if found.iter().any(|f| f.is_subset(&cur)) {
            continue;
        }
        if i == pairs.len() {
            found.retain(|f| !cur.is_subset(f));
            found.push(cur);
            if found.len() >= limit {
                return None;
            }
            continue;
        }
        for dir in [1, 0] {
            let mut next = cur.clone();
            for &e in &options[i][dir] {
                next.insert(e);
            }
            stack.push((i + 1, next));
        }
    }
    Some(
        found
            .into_iter()
            .map(|b| {
                let mut l: Relation = vec![Vec::new(); n];
                let mut r: Relation = vec![Vec::new(); n];
                for x in b.iter() {
                    let (q, right, t, p) = edges[x];
                    if right {
                        r[q].push((t, p));
                    } else {
                        l[q].push((t, p));
                    }
                }
                for v in l.iter_mut().chain(r.iter_mut()) {
                    v.sort_unstable();
                }
                (l, r)
            })
            .collect(),
    )
}

/// Minimal `(S_L, S_R)` with every target `(l, pl, r, pr)` having `(l, pl)`
/// in `S_L` or `(r, pr)` in `S_R`.
fn minimal_covers(targets: &[Target]) -> Result<Vec<(Vec<(State, u32)>, Vec<(State, u32)>)>> {
    let pairs: Vec<((State, u32), (State, u32))> = targets.iter().map(|&(l, pl, r, pr)| ((l, pl), (r, pr))).collect();
    let mut xl: Vec<(State, u32)> = pairs.iter().map(|p| p.0).collect();
    let mut xr: Vec<(State, u32)> = pairs.iter().map(|p| p.1).collect();
    xl.sort_unstable();
    xl.dedup();
    xr.sort_unstable();
    xr.dedup();
    let flip = xr.len() < xl.len();
    let (side, pairs) = if flip { (xr, pairs.iter().map(|&(l, r)| (r, l)).collect()) } else { (xl, pairs) };
    if side.len() > MAX_COVER_SIDE {
        return Err(AutomataError::ResourceCap { what: "distinct successors refuted in one step", limit: MAX_COVER_SIDE });
    }
    let mut out = Vec::new();
    for m in 0u32..(1u32 << side.len()) {
        let kept = |x: (State, u32)| m >> side.binary_search(&x).unwrap() & 1 == 1;
        let mut other: Vec<(State, u32)> = pairs.iter().filter(|p| !kept(p.0)).map(|p| p.1).collect();
        other.sort_unstable();
        other.dedup();
        let minimal = side
            .iter()
            .filter(|&&x| kept(x))
            .all(|&x| pairs.iter().any(|&(a, b)| a == x && other.binary_search(&b).is_err()));
        if minimal {
            let mine: Vec<(State, u32)> = side.iter().copied().filter(|&x| kept(x)).collect();
            out.push(if flip { (other, mine) } else { (mine, other) });
        }
    }
    Ok(out)
}

/// Coarsest bisimulation of an edge automaton, numbering classes in order of
/// first occurrence.
fn edge_bisimulation(moves: &[Vec<Vec<Edge>>]) -> Vec<usize> {
    let n = moves.len();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<Vec<Edge>>), usize> = HashMap::new();
        // node 0 is keyed first and keeps class 0
        let mut key = |v: usize, class: &[usize]| {
            let sig: Vec<Vec<Edge>> = moves[v]
                .iter()
                .map(|es| {
                    let mut s: Vec<Edge> = es.iter().map(|&(l, pl, r, pr)| (class[l], pl, class[r], pr)).collect();
                    s.sort_unstable();
                    s.dedup();
                    s
                })
                .collect();
            let len = ids.len();
            *ids.entry((class[v], sig)).or_insert(len)
        };
        let mut next = vec![0; n];
        next[0] = key(0, &class);
        for v in 1..n {
            next[v] = key(v, &class);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

/// Automaton accepting, from the `i`-th returned state, exactly the trees
/// rejected by `base` from every state of `starts[i]`. The automaton's own
/// initial state is the first of them.
pub fn refutation_automaton(
    base: &TreeAutomaton,
    starts: &[Vec<State>],
    budget: Budget,
) -> Result<(TreeAutomaton, Vec<State>)> {
    assert!(!starts.is_empty());
    let (form, base_class) = EdgeForm::new(base);
    let mut b = Builder::new(&form, budget);
    let mut init = Vec::with_capacity(starts.len());
    for s in starts {
        let mapped: Vec<State> = s.iter().map(|&q| base_class[q]).collect();
        init.push(b.start(&mapped)?);
    }
    let k = base.alphabet().len();
    let mut moves: Vec<Vec<Vec<Edge>>> = Vec::new();
    let mut s = 0;
    while s < b.trees.len() {
        let mut row = Vec::with_capacity(k);
        for c in 0..k {
            row.push(b.moves(s, c)?);
        }
        moves.push(row);
        b.budget.check_time()?;
        s += 1;
    }
    let class = edge_bisimulation(&moves);
    let classes = class.iter().copied().max().unwrap_or(0) + 1;
    let mut rep = vec![usize::MAX; classes];
    for (v, &c) in class.iter().enumerate().rev() {
        rep[c] = v;
    }

    // expand to state-based priorities over pairs (class, priority)
    let mut id: HashMap<(usize, u32), State> = HashMap::new();
    let mut order: Vec<(usize, u32)> = Vec::new();
    let mut get = |x: (usize, u32), order: &mut Vec<(usize, u32)>| {
        *id.entry(x).or_insert_with(|| {
            order.push(x);
            order.len() - 1
        })
    };
    let init: Vec<State> = init.iter().map(|&t| get((class[t], 0), &mut order)).collect();
    let mut tr = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (c, _) = order[i];
        for (letter, es) in moves[rep[c]].iter().enumerate() {
            for &(l, pl, r, pr) in es {
                let ls = get((class[l], pl), &mut order);
                let rs = get((class[r], pr), &mut order);
                tr.push(Transition { state: i, letter, left: ls, right: rs });
            }
        }
        i += 1;
    }
    let priority = order.iter().map(|&(_, p)| p).collect();
    let aut = TreeAutomaton::new(base.alphabet().clone(), priority, init[0], tr)?;
    Ok((aut, init))
}
