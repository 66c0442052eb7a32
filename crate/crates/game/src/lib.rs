//! Finite parity games under the max-even condition: a play is won by Even
//! iff the largest priority seen infinitely often is even.
//!
//! [`solve`] is the recursive attractor algorithm. Subgames are represented by
//! a level stamp per vertex instead of fresh sets, so a call costs time linear
//! in the subgame and the recursion depth is bounded by the number of distinct
//! priorities.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    fn of_priority(p: u32) -> Player {
        if p % 2 == 0 {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

/// A game graph in which every vertex has at least one successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameArena {
    owner: Vec<Player>,
    priority: Vec<u32>,
    edges: Vec<Vec<usize>>,
}

/// Incremental construction; dead ends are resolved in [`ArenaBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct ArenaBuilder {
    owner: Vec<Player>,
    priority: Vec<u32>,
    edges: Vec<Vec<usize>>,
}

impl ArenaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, owner: Player, priority: u32) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.edges.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.edges[from].push(to);
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// A vertex without moves loses for its owner: it becomes a self-loop whose
    /// priority has the opponent's parity.
    pub fn build(mut self) -> GameArena {
        for v in 0..self.owner.len() {
            assert!(self.edges[v].iter().all(|&w| w < self.owner.len()), "edge to unknown vertex");
            if self.edges[v].is_empty() {
                self.edges[v].push(v);
                self.priority[v] = match self.owner[v] {
                    Player::Even => 1,
                    Player::Odd => 0,
                };
            }
        }
        GameArena { owner: self.owner, priority: self.priority, edges: self.edges }
    }
}

impl GameArena {
    /// Builds an arena directly; dead ends are resolved as in [`ArenaBuilder`].
    pub fn new(owner: Vec<Player>, priority: Vec<u32>, edges: Vec<Vec<usize>>) -> GameArena {
        assert!(owner.len() == priority.len() && owner.len() == edges.len());
        ArenaBuilder { owner, priority, edges }.build()
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn edges(&self, v: usize) -> &[usize] {
        &self.edges[v]
    }

    /// Text dump: one line `v owner priority: succ succ ...` per vertex.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for v in 0..self.len() {
            let o = if self.owner[v] == Player::Even { "even" } else { "odd" };
            write!(s, "{v} {o} {}:", self.priority[v]).unwrap();
            for w in &self.edges[v] {
                write!(s, " {w}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Winning regions and positional strategies. `strategy[v]` is an index into
/// `arena.edges(v)`, defined exactly when `v`'s owner wins from `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<usize>>,
}

impl Solution {
    pub fn wins(&self, v: usize) -> Player {
        self.winner[v]
    }

    pub fn region(&self, p: Player) -> Vec<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == p).collect()
    }

    /// The successor chosen at `v`, if the owner of `v` wins there.
    pub fn choice(&self, arena: &GameArena, v: usize) -> Option<usize> {
        self.strategy[v].map(|i| arena.edges(v)[i])
    }
}

struct Solver<'a> {
    g: &'a GameArena,
    pred: Vec<Vec<usize>>,
    lvl: Vec<u32>,
    winner: Vec<Player>,
    strat: Vec<Option<usize>>,
    count: Vec<u32>,
    mark: Vec<u32>,
    epoch: u32,
}

impl Solver<'_> {
    fn inside(&self, v: usize, k: u32) -> bool {
        self.lvl[v] >= k
    }

    fn first_edge_into(&self, v: usize, in_set: impl Fn(usize) -> bool) -> usize {
        self.g.edges[v].iter().position(|&w| in_set(w)).expect("edge into set")
    }

    /// Attractor for `p` of `target` within the level-`k` subgame; returns its
    /// members and records attractor moves for `p`'s vertices outside `target`.
    fn attractor(&mut self, members: &[usize], k: u32, target: &[usize], p: Player) -> Vec<usize> {
        self.epoch += 1;
        let ep = self.epoch;
        for &v in members {
            self.count[v] = self.g.edges[v].iter().filter(|&&w| self.lvl[w] >= k).count() as u32;
        }
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for &t in target {
            if self.mark[t] != ep {
                self.mark[t] = ep;
                out.push(t);
                queue.push_back(t);
            }
        }
        while let Some(w) = queue.pop_front() {
            for i in 0..self.pred[w].len() {
                let v = self.pred[w][i];
                if !self.inside(v, k) || self.mark[v] == ep {
                    continue;
                }
                let take = if self.g.owner[v] == p {
                    true
                } else {
                    self.count[v] -= 1;
                    self.count[v] == 0
                };
                if take {
                    if self.g.owner[v] == p {
                        let mark = &self.mark;
                        let lvl = &self.lvl;
                        let e = self.first_edge_into(v, |x| mark[x] == ep && lvl[x] >= k);
                        self.strat[v] = Some(e);
                    }
                    self.mark[v] = ep;
                    out.push(v);
                    queue.push_back(v);
                }
            }
        }
        out
    }

    /// Solves the subgame made of `members` at level `k`; members have
    /// `lvl >= k` on entry.
    fn solve(&mut self, mut members: Vec<usize>, k: u32) {
        loop {
            if members.is_empty() {
                return;
            }
            for &v in &members {
                self.lvl[v] = k;
            }
            let p = members.iter().map(|&v| self.g.priority[v]).max().unwrap();
            let me = Player::of_priority(p);
            let top: Vec<usize> = members.iter().copied().filter(|&v| self.g.priority[v] == p).collect();
            let attr = self.attractor(&members, k, &top, me);
            let ep = self.epoch;
            let rest: Vec<usize> = members.iter().copied().filter(|&v| self.mark[v] != ep).collect();
            let attr_set = attr;
            for &v in &rest {
                self.lvl[v] = k + 1;
            }
            self.solve(rest.clone(), k + 1);
            for &v in &rest {
                self.lvl[v] = k;
            }
            let lost: Vec<usize> = rest.iter().copied().filter(|&v| self.winner[v] != me).collect();
            if lost.is_empty() {
                for &v in &attr_set {
                    self.winner[v] = me;
                    if self.g.owner[v] != me {
                        self.strat[v] = None;
                    } else if self.g.priority[v] == p {
                        // a top vertex may move anywhere inside the subgame
                        let lvl = &self.lvl;
                        self.strat[v] = Some(self.first_edge_into(v, |x| lvl[x] >= k));
                    }
                }
                return;
            }
            let opp = me.opponent();
            let b = self.attractor(&members, k, &lost, opp);
            for &v in &b {
                self.winner[v] = opp;
                if self.g.owner[v] != opp {
                    self.strat[v] = None;
                }
                // vertices of `lost` keep the strategy from the subgame
                self.lvl[v] = k.saturating_sub(1);
            }
            let ep = self.epoch;
            members.retain(|&v| self.mark[v] != ep);
        }
    }
}

/// Solves the game exactly. Deterministic: ties go to the lowest edge index.
pub fn solve(arena: &GameArena) -> Solution {
    let n = arena.len();
    let mut pred = vec![Vec::new(); n];
    for v in 0..n {
        for &w in &arena.edges[v] {
            pred[w].push(v);
        }
    }
    for p in &mut pred {
        p.dedup();
    }
    let mut s = Solver {
        g: arena,
        pred,
        lvl: vec![1; n],
        winner: vec![Player::Even; n],
        strat: vec![None; n],
        count: vec![0; n],
        mark: vec![0; n],
        epoch: 0,
    };
    s.solve((0..n).collect(), 1);
    let mut strategy = s.strat;
    for v in 0..n {
        if s.winner[v] != arena.owner[v] {
            strategy[v] = None;
        }
    }
    Solution { winner: s.winner, strategy }
}

/// Samples lasso plays that follow the claimed winner's strategy against a
/// randomly fixed positional opponent and checks that each lasso's cycle has
/// the right parity and never leaves the claimed region.
pub fn verify_strategy<R: Rng + ?Sized>(arena: &GameArena, sol: &Solution, samples: usize, rng: &mut R) -> bool {
    let n = arena.len();
    if n == 0 {
        return true;
    }
    if sol.winner.len() != n || sol.strategy.len() != n {
        return false;
    }
    for _ in 0..samples {
        let start = rng.gen_range(0..n);
        let claim = sol.winner[start];
        let mut opp_choice: Vec<Option<usize>> = vec![None; n];
        let mut pos = vec![usize::MAX; n];
        let mut play = Vec::new();
        let mut v = start;
        loop {
            if sol.winner[v] != claim {
                return false;
            }
            if pos[v] != usize::MAX {
                break;
            }
            pos[v] = play.len();
            play.push(v);
            let next = if arena.owner[v] == claim {
                match sol.strategy[v] {
                    Some(i) if i < arena.edges[v].len() => arena.edges[v][i],
                    _ => return false,
                }
            } else {
                let i = *opp_choice[v].get_or_insert_with(|| rng.gen_range(0..arena.edges[v].len()));
                arena.edges[v][i]
            };
            v = next;
        }
        let top = play[pos[v]..].iter().map(|&w| arena.priority[w]).max().unwrap();
        if Player::of_priority(top) != claim {
            return false;
        }
    }
    true
}
