use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;

use crate::{Alphabet, Dir, FinitePrefix, Letter, ModelError};

/// An infinite binary tree presented as a finite rooted graph: every vertex
/// carries a letter and an ordered pair of successors, and the tree is the
/// unfolding from the root. All vertices are reachable from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularTree {
    alphabet: Alphabet,
    nodes: Vec<(Letter, usize, usize)>,
    root: usize,
}

impl RegularTree {
    pub fn new(alphabet: Alphabet, nodes: Vec<(Letter, usize, usize)>, root: usize) -> Result<Self, ModelError> {
        let n = nodes.len();
        if root >= n {
            return Err(ModelError::Tree("root out of range".into()));
        }
        for &(a, l, r) in &nodes {
            if a >= alphabet.len() || l >= n || r >= n {
                return Err(ModelError::Tree("vertex refers to an unknown letter or vertex".into()));
            }
        }
        let t = RegularTree { alphabet, nodes, root };
        if t.reachable().len() != n {
            return Err(ModelError::Tree("some vertex is unreachable from the root".into()));
        }
        Ok(t)
    }

    /// Builds a tree from an arbitrary graph, dropping unreachable vertices.
    pub fn new_trimmed(alphabet: Alphabet, nodes: Vec<(Letter, usize, usize)>, root: usize) -> Result<Self, ModelError> {
        let n = nodes.len();
        if root >= n || nodes.iter().any(|&(a, l, r)| a >= alphabet.len() || l >= n || r >= n) {
            return Err(ModelError::Tree("vertex refers to an unknown letter or vertex".into()));
        }
        let raw = RegularTree { alphabet, nodes, root };
        Ok(raw.trimmed())
    }

    /// The tree all of whose nodes carry `a`.
    pub fn constant(alphabet: &Alphabet, a: Letter) -> Self {
        RegularTree { alphabet: alphabet.clone(), nodes: vec![(a, 0, 0)], root: 0 }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn label(&self, v: usize) -> Letter {
        self.nodes[v].0
    }

    pub fn left(&self, v: usize) -> usize {
        self.nodes[v].1
    }

    pub fn right(&self, v: usize) -> usize {
        self.nodes[v].2
    }

    pub fn child(&self, v: usize, d: Dir) -> usize {
        match d {
            Dir::L => self.left(v),
            Dir::R => self.right(v),
        }
    }

    pub fn nodes(&self) -> &[(Letter, usize, usize)] {
        &self.nodes
    }

    /// Vertex reached from the root along `path`.
    pub fn vertex_at(&self, path: &[Dir]) -> usize {
        path.iter().fold(self.root, |v, &d| self.child(v, d))
    }

    /// The subtree rooted at vertex `v`, as its own presentation.
    pub fn subtree(&self, v: usize) -> RegularTree {
        RegularTree { alphabet: self.alphabet.clone(), nodes: self.nodes.clone(), root: v }.trimmed()
    }

    /// Same graph over a larger alphabet that keeps the letter indices of this
    /// one as a prefix (e.g. [`Alphabet::extended`]).
    pub fn over(&self, alphabet: &Alphabet) -> RegularTree {
        assert!(alphabet.len() >= self.alphabet.len());
        RegularTree { alphabet: alphabet.clone(), nodes: self.nodes.clone(), root: self.root }
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = vec![self.root];
        seen[self.root] = true;
        let mut i = 0;
        while i < order.len() {
            let (_, l, r) = self.nodes[order[i]];
            i += 1;
            for s in [l, r] {
                if !seen[s] {
                    seen[s] = true;
                    order.push(s);
                }
            }
        }
        order
    }

    /// Renumbers reachable vertices in breadth-first order from the root.
    fn trimmed(&self) -> RegularTree {
        let order = self.reachable();
        let mut id = vec![usize::MAX; self.nodes.len()];
        for (i, &v) in order.iter().enumerate() {
            id[v] = i;
        }
        let nodes = order.iter().map(|&v| (self.nodes[v].0, id[self.nodes[v].1], id[self.nodes[v].2])).collect();
        RegularTree { alphabet: self.alphabet.clone(), nodes, root: 0 }
    }

    /// The prefix made of all nodes at depth smaller than `depth`.
    pub fn unfold(&self, depth: usize) -> FinitePrefix {
        assert!(depth >= 1, "unfold depth must be positive");
        let mut prefix = FinitePrefix::default();
        let mut queue = VecDeque::from([(Vec::new(), self.root)]);
        while let Some((path, v)) = queue.pop_front() {
            prefix.insert(path.clone(), self.label(v));
            if path.len() + 1 < depth {
                for d in [Dir::L, Dir::R] {
                    let mut p = path.clone();
                    p.push(d);
                    queue.push_back((p, self.child(v, d)));
                }
            }
        }
        prefix
    }

    /// Whether the unfolding agrees with `prefix` on the prefix's domain.
    pub fn extends(&self, prefix: &FinitePrefix) -> bool {
        prefix.iter().all(|(path, a)| self.label(self.vertex_at(path)) == *a)
    }

    /// A random regular tree with at most `max_vertices` vertices.
    pub fn random<R: Rng + ?Sized>(alphabet: &Alphabet, max_vertices: usize, rng: &mut R) -> Self {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let nodes = (0..n)
            .map(|_| (rng.gen_range(0..alphabet.len()), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        RegularTree { alphabet: alphabet.clone(), nodes, root: 0 }.trimmed()
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, ModelError> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut raw: Vec<(usize, Letter, String, String)> = Vec::new();
        let mut root: Option<(usize, String)> = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| ModelError::Syntax { line: line_no, msg: msg.to_string() };
            let Some((key, rest)) = line.split_once(':') else {
                return Err(syntax("expected `key: value`"));
            };
            let w: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "vertex" => {
                    if w.len() != 4 {
                        return Err(syntax("`vertex` takes id letter left right"));
                    }
                    let a = alphabet
                        .index(w[1])
                        .ok_or_else(|| ModelError::UnknownLetter { line: line_no, letter: w[1].to_string() })?;
                    let next = ids.len();
                    if ids.insert(w[0].to_string(), next).is_some() {
                        return Err(syntax("vertex declared twice"));
                    }
                    raw.push((line_no, a, w[2].to_string(), w[3].to_string()));
                }
                "root" => {
                    if w.len() != 1 || root.is_some() {
                        return Err(syntax("`root` takes one vertex and appears once"));
                    }
                    root = Some((line_no, w[0].to_string()));
                }
                other => return Err(syntax(&format!("unknown key {other:?}"))),
            }
        }
        let lookup = |line: usize, s: &str| {
            ids.get(s).copied().ok_or_else(|| ModelError::UnknownState { line, state: s.to_string() })
        };
        let (rline, rname) = root.ok_or(ModelError::MissingSection("root"))?;
        let root = lookup(rline, &rname)?;
        let mut nodes = Vec::with_capacity(raw.len());
        for (line, a, l, r) in &raw {
            nodes.push((*a, lookup(*line, l)?, lookup(*line, r)?));
        }
        RegularTree::new(alphabet.clone(), nodes, root)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (v, &(a, l, r)) in self.nodes.iter().enumerate() {
            writeln!(s, "vertex: {v} {} {l} {r}", self.alphabet.name(a)).unwrap();
        }
        writeln!(s, "root: {}", self.root).unwrap();
        s
    }
}
