#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Mutex;

use wadge_algebra::{syntactic_algebra, Limits, SyntacticAlgebra};
use wadge_automata::{complement, Budget};
use wadge_games::TypeGames;
use wadge_model::TreeAutomaton;

pub const FIXTURES: [&str; 5] = ["root_a", "contains_b", "inf_a", "spine_finite_non_c", "spine_contains_c"];

pub fn fixture(name: &str) -> TreeAutomaton {
    let path = format!("{}/../../fixtures/{name}.aut", env!("CARGO_MANIFEST_DIR"));
    TreeAutomaton::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn aut(text: &str) -> TreeAutomaton {
    TreeAutomaton::parse(text).unwrap()
}

fn cached<T: Send + Sync + 'static>(
    cache: &'static Mutex<Option<HashMap<String, &'static T>>>,
    name: &str,
    build: impl FnOnce() -> T,
) -> &'static T {
    let mut guard = cache.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    map.entry(name.to_string()).or_insert_with(|| Box::leak(Box::new(build())))
}

/// Complements are built once per test binary.
pub fn complement_of(name: &str) -> &'static TreeAutomaton {
    static CACHE: Mutex<Option<HashMap<String, &'static TreeAutomaton>>> = Mutex::new(None);
    cached(&CACHE, name, || complement(&fixture(name), Budget::default()).unwrap())
}

pub fn syntactic(name: &str) -> &'static SyntacticAlgebra {
    static CACHE: Mutex<Option<HashMap<String, &'static SyntacticAlgebra>>> = Mutex::new(None);
    cached(&CACHE, name, || syntactic_algebra(&fixture(name), &Limits::default()).unwrap())
}

pub fn games(name: &str) -> &'static TypeGames<'static> {
    static CACHE: Mutex<Option<HashMap<String, &'static TypeGames<'static>>>> = Mutex::new(None);
    let syn = syntactic(name);
    cached(&CACHE, name, || TypeGames::new(syn).unwrap())
}

/// All words of length `n` over `0..k`.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (0..k).map(move |x| [w.clone(), vec![x]].concat())).collect();
    }
    out
}
