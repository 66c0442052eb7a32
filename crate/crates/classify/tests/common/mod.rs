#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wadge_algebra::{syntactic_algebra, Limits, SyntacticAlgebra, ThinAlgebra};
use wadge_automata::{complement, Budget};
use wadge_model::{Alphabet, RegularTree, TreeAutomaton};

pub const FIXTURES: [&str; 5] = ["root_a", "contains_b", "inf_a", "spine_finite_non_c", "spine_contains_c"];

pub fn fixture(name: &str) -> TreeAutomaton {
    let path = format!("{}/../../fixtures/{name}.aut", env!("CARGO_MANIFEST_DIR"));
    TreeAutomaton::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn aut(text: &str) -> TreeAutomaton {
    TreeAutomaton::parse(text).unwrap()
}

pub fn samples(alphabet: &Alphabet, n: usize, seed: u64) -> Vec<RegularTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| RegularTree::random(alphabet, 6, &mut rng)).collect()
}

/// Syntactic algebras are expensive, so each test binary builds them once.
pub fn syntactic(name: &str) -> &'static SyntacticAlgebra {
    static CACHE: Mutex<Option<HashMap<String, &'static SyntacticAlgebra>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(name.to_string())
        .or_insert_with(|| Box::leak(Box::new(syntactic_algebra(&fixture(name), &Limits::default()).unwrap())))
}

pub fn complement_of(name: &str) -> &'static TreeAutomaton {
    static CACHE: Mutex<Option<HashMap<String, &'static TreeAutomaton>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(name.to_string())
        .or_insert_with(|| Box::leak(Box::new(complement(&fixture(name), Budget::default()).unwrap())))
}

/// All words of length `n` over `0..k`.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (0..k).map(move |x| [w.clone(), vec![x]].concat())).collect();
    }
    out
}

/// One node of a context path: its letter, whether the path continues to
/// the left, and the tree hanging off the other side.
#[derive(Clone, Debug)]
pub struct Step {
    pub letter: usize,
    pub port_left: bool,
    pub side: RegularTree,
}

pub fn random_context(alphabet: &Alphabet, max_len: usize, rng: &mut ChaCha8Rng) -> Vec<Step> {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| Step {
            letter: rng.gen_range(0..alphabet.len()),
            port_left: rng.gen_bool(0.5),
            side: RegularTree::random(alphabet, 4, rng),
        })
        .collect()
}

/// What fills the port of a context path.
pub enum Tail<'a> {
    /// a plain tree
    Tree(&'a RegularTree),
    /// the path itself again, giving `C^∞`
    Loop,
    /// a multicontext port: `PORT` over padding
    Port,
    /// an environment port: `PORT` whose left child is the tree
    EnvPort(&'a RegularTree),
}

fn append(nodes: &mut Vec<(usize, usize, usize)>, t: &RegularTree) -> usize {
    let off = nodes.len();
    nodes.extend(t.nodes().iter().map(|&(a, l, r)| (a, l + off, r + off)));
    off + t.root()
}

/// Concrete tree for `steps` with `tail` in the port, over `alphabet` (the
/// base alphabet, or its extension when the tail uses markers).
pub fn plug(alphabet: &Alphabet, steps: &[Step], tail: Tail) -> RegularTree {
    let marker = |name| alphabet.index(name).expect("extended alphabet");
    let mut nodes: Vec<(usize, usize, usize)> = steps.iter().map(|s| (s.letter, 0, 0)).collect();
    let end = match tail {
        Tail::Tree(t) => append(&mut nodes, t),
        Tail::Loop => 0,
        Tail::Port => {
            let p = nodes.len();
            nodes.push((marker("PORT"), p + 1, p + 1));
            nodes.push((marker("PAD"), p + 1, p + 1));
            p
        }
        Tail::EnvPort(t) => {
            let p = nodes.len();
            nodes.push((marker("PORT"), 0, p + 1));
            nodes.push((marker("PAD"), p + 1, p + 1));
            let root = append(&mut nodes, t);
            nodes[p].1 = root;
            p
        }
    };
    for (i, s) in steps.iter().enumerate() {
        let side = append(&mut nodes, &s.side);
        let next = if i + 1 < steps.len() { i + 1 } else { end };
        nodes[i] = if s.port_left { (s.letter, next, side) } else { (s.letter, side, next) };
    }
    let root = if steps.is_empty() { end } else { 0 };
    RegularTree::new(alphabet.clone(), nodes, root).unwrap()
}

/// Context type of a path by table evaluation, from the types of its side
/// trees.
pub fn table_type(alg: &ThinAlgebra, steps: &[Step], type_of: impl Fn(&RegularTree) -> usize) -> usize {
    steps.iter().fold(alg.unit(), |acc, s| {
        let h = type_of(&s.side);
        let g = if s.port_left { alg.inject_left(s.letter, h) } else { alg.inject_right(s.letter, h) };
        alg.compose(acc, g)
    })
}
