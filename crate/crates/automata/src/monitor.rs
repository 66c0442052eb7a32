//! Deterministic monitor turning the conjunction of two max-even parity
//! conditions into a single max-even priority stream.
//!
//! Each odd priority `o` of either input gives a Streett pair: requests are
//! priorities `>= o`, answers are even priorities `> o` on the same input. The
//! monitor state is an index appearance record: a permutation of the pairs in
//! which answered pairs move to the back. With `g` the leftmost old position
//! answered and `r` the leftmost old position requested, the step emits `2g`
//! when `g <= r`, else `2r + 1`, else the neutral even value `2k` (min-parity),
//! flipped to max-even as `2k - x`. Pairs that are answered only finitely often
//! settle at the front, so the least position touched infinitely often decides.

use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pair {
    side: u8,
    odd: u32,
}

#[derive(Clone, Debug)]
pub struct ConditionMonitor {
    pairs: Vec<Pair>,
    perms: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl ConditionMonitor {
    /// Monitor for inputs whose priorities range over the given sets.
    pub fn new(prios_a: &[u32], prios_b: &[u32]) -> Self {
        let mut pairs = Vec::new();
        for (side, ps) in [(0u8, prios_a), (1u8, prios_b)] {
            let mut odd: Vec<u32> = ps.iter().copied().filter(|p| p % 2 == 1).collect();
            odd.sort_unstable();
            odd.dedup();
            pairs.extend(odd.into_iter().map(|o| Pair { side, odd: o }));
        }
        assert!(pairs.len() < 256);
        let start: Vec<u8> = (0..pairs.len() as u8).collect();
        let mut m = ConditionMonitor { pairs, perms: Vec::new(), index: HashMap::new() };
        m.intern(start);
        m
    }

    fn intern(&mut self, p: Vec<u8>) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        self.perms.push(p.clone());
        self.index.insert(p, self.perms.len() - 1);
        self.perms.len() - 1
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Emitted priority and successor state after reading `(pa, pb)`.
    pub fn step(&mut self, state: usize, pa: u32, pb: u32) -> (u32, usize) {
        let perm = self.perms[state].clone();
        let k = perm.len();
        let mut g = usize::MAX;
        let mut r = usize::MAX;
        let mut kept = Vec::with_capacity(k);
        let mut moved = Vec::new();
        for (pos, &i) in perm.iter().enumerate() {
            let pair = self.pairs[i as usize];
            let p = if pair.side == 0 { pa } else { pb };
            let answered = p % 2 == 0 && p > pair.odd;
            if answered {
                g = g.min(pos);
                moved.push(i);
            } else {
                kept.push(i);
            }
            if p >= pair.odd {
                r = r.min(pos);
            }
        }
        let min_parity = if g != usize::MAX && g <= r {
            2 * g
        } else if r != usize::MAX {
            2 * r + 1
        } else {
            2 * k
        };
        kept.extend(moved);
        let next = self.intern(kept);
        ((2 * k - min_parity) as u32, next)
    }
}
