//! Safra trees for Büchi automata obtained from parity automata.
//!
//! A max-even parity word automaton with priorities on its edges is turned
//! into a Büchi automaton whose states are `(s, ⊥)` (no guess yet) and
//! `(s, m)` for even `m`: the guess that from now on no priority exceeds `m`.
//! An edge of priority `p` yields `(s, m) -> (t, m)` when `p <= m`, accepting
//! when `p = m`.
//!
//! Trees use compact, age-ordered node indices (older nodes first) so that the
//! emitted min-parity priority is `2f + 2` for the least green index `f` that
//! sits below the least changed index `e`, `2e + 1` otherwise, and the neutral
//! odd value `2w + 3` when nothing happened. A reset at index `i` thus beats
//! greens at `i` but loses to greens at smaller indices.

use crate::bits::Bits;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SafraTree {
    pub labels: Vec<Bits>,
    /// parent index; the root carries `u16::MAX`
    pub parent: Vec<u16>,
}

impl SafraTree {
    pub fn root(label: Bits) -> Option<SafraTree> {
        if label.is_empty() {
            None
        } else {
            Some(SafraTree { labels: vec![label], parent: vec![u16::MAX] })
        }
    }
}

/// Büchi view of a parity automaton with priorities on its edges.
#[derive(Clone, Debug)]
pub(crate) struct NbaView {
    states: usize,
    evens: Vec<u32>,
}

impl NbaView {
    pub fn new(states: usize, max_priority: u32) -> NbaView {
        let evens = (0..=max_priority).filter(|m| m % 2 == 0).collect();
        NbaView { states, evens }
    }

    fn slots(&self) -> usize {
        self.evens.len() + 1
    }

    pub fn width(&self) -> usize {
        self.states * self.slots()
    }

    /// Index of the unguessed copy of `s`.
    pub fn bottom(&self, s: usize) -> usize {
        s * self.slots()
    }

    /// Successor sets `(δ(S), δ_acc(S))` under the parity successor relation
    /// `succ[s]` of `(target, edge priority)` pairs.
    pub fn post(&self, label: &Bits, succ: &[Vec<(usize, u32)>]) -> (Bits, Bits) {
        let k = self.slots();
        let mut next = Bits::new(self.width());
        let mut acc = Bits::new(self.width());
        for x in label.iter() {
            let (s, slot) = (x / k, x % k);
            if slot == 0 {
                for &(t, _) in &succ[s] {
                    for j in 0..k {
                        next.insert(t * k + j);
                    }
                }
            } else {
                let m = self.evens[slot - 1];
                for &(t, p) in &succ[s] {
                    if p <= m {
                        next.insert(t * k + slot);
                        if p == m {
                            acc.insert(t * k + slot);
                        }
                    }
                }
            }
        }
        (next, acc)
    }
}

/// One Safra step. `None` means no run survives.
pub(crate) fn step(tree: &SafraTree, width: usize, post: impl Fn(&Bits) -> (Bits, Bits)) -> Option<(SafraTree, u32)> {
    let old = tree.labels.len();
    let mut labels = Vec::with_capacity(2 * old);
    let mut parent: Vec<usize> = Vec::with_capacity(2 * old);
    let mut origin: Vec<usize> = Vec::with_capacity(2 * old);
    let mut fresh = Vec::with_capacity(old);
    for i in 0..old {
        let (n, a) = post(&tree.labels[i]);
        labels.push(n);
        parent.push(tree.parent[i] as usize);
        origin.push(i);
        fresh.push(a);
    }
    for (i, a) in fresh.into_iter().enumerate() {
        labels.push(a);
        parent.push(i);
        origin.push(usize::MAX);
    }
    let total = labels.len();
    // horizontal merge: a state stays only in the oldest node holding it
    let mut claimed: Vec<Bits> = vec![Bits::new(width); total];
    for c in 1..total {
        let p = parent[c];
        let (pl, cl) = (labels[p].clone(), &mut labels[c]);
        cl.intersect_with(&pl);
        cl.difference_with(&claimed[p]);
        let add = labels[c].clone();
        claimed[p].union_with(&add);
    }
    let mut alive: Vec<bool> = labels.iter().map(|l| !l.is_empty()).collect();
    if !alive[0] {
        return None;
    }
    for c in 1..total {
        if !alive[parent[c]] {
            alive[c] = false;
        }
    }
    // vertical merge, top-down by index (parents precede children)
    let mut green = vec![false; total];
    let mut union_children: Vec<Bits> = vec![Bits::new(width); total];
    for c in 1..total {
        if alive[c] {
            let l = labels[c].clone();
            union_children[parent[c]].union_with(&l);
        }
    }
    for v in 0..total {
        if !alive[v] {
            continue;
        }
        if v > 0 && !alive[parent[v]] {
            alive[v] = false;
            continue;
        }
        if !union_children[v].is_empty() && union_children[v] == labels[v] {
            green[v] = true;
            for c in v + 1..total {
                if alive[c] && is_descendant(&parent, c, v) {
                    alive[c] = false;
                }
            }
        }
    }
    // compaction
    let mut pos = vec![usize::MAX; total];
    let mut out = SafraTree { labels: Vec::new(), parent: Vec::new() };
    let mut e = usize::MAX;
    let mut f = usize::MAX;
    for v in 0..total {
        if !alive[v] {
            continue;
        }
        let i = out.labels.len();
        pos[v] = i;
        out.labels.push(labels[v].clone());
        out.parent.push(if v == 0 { u16::MAX } else { pos[parent[v]] as u16 });
        if origin[v] != i && e == usize::MAX {
            e = i;
        }
        if green[v] && f == usize::MAX {
            f = i;
        }
    }
    if out.labels.len() < old {
        e = e.min(out.labels.len());
    }
    let prio = if f != usize::MAX && f < e {
        2 * f + 2
    } else if e != usize::MAX {
        2 * e + 1
    } else {
        2 * width + 3
    };
    Some((out, prio as u32))
}

fn is_descendant(parent: &[usize], mut c: usize, v: usize) -> bool {
    while c != 0 {
        c = parent[c];
        if c == v {
            return true;
        }
    }
    false
}

/// Upper end of the min-parity range produced for trees over `width` states.
pub(crate) fn parity_bound(width: usize) -> u32 {
    2 * width as u32 + 4
}
