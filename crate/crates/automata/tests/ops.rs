use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wadge_automata::*;
use wadge_model::{Alphabet, Dir, FinitePrefix, RegularTree, Transition, TreeAutomaton};

fn fixture(name: &str) -> TreeAutomaton {
    let path = format!("{}/../../fixtures/{name}.aut", env!("CARGO_MANIFEST_DIR"));
    TreeAutomaton::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn aut(text: &str) -> TreeAutomaton {
    TreeAutomaton::parse(text).unwrap()
}

fn ab() -> Alphabet {
    Alphabet::new(&["a", "b"]).unwrap()
}

fn root_b() -> TreeAutomaton {
    aut("alphabet: a b\nstates: 2\ninitial: 0\npriority: 0 0\npriority: 1 0\ntrans: 0 b 1 1\ntrans: 1 a 1 1\ntrans: 1 b 1 1\n")
}

fn samples(alphabet: &Alphabet, n: usize, seed: u64) -> Vec<RegularTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| RegularTree::random(alphabet, 6, &mut rng)).collect()
}

/// Trees built by hand, so membership is known without any automaton.
/// Lines `x = a y z` give vertex `x` letter `a` and children `y`, `z`; the
/// first vertex is the root.
fn tree(text: &str) -> RegularTree {
    let mut out = String::new();
    for line in text.lines() {
        let w: Vec<&str> = line.split_whitespace().filter(|w| *w != "=").collect();
        out.push_str(&format!("vertex: {}\n", w.join(" ")));
    }
    let root = text.split_whitespace().next().unwrap();
    out.push_str(&format!("root: {root}\n"));
    RegularTree::parse(&out, &ab()).unwrap()
}

const FIXTURES: [&str; 5] = ["root_a", "contains_b", "inf_a", "spine_finite_non_c", "spine_contains_c"];

#[test]
fn intersection_with_universal_keeps_language() {
    for f in FIXTURES {
        let a = fixture(f);
        let i = intersection(&a, &TreeAutomaton::universal(a.alphabet())).unwrap();
        for t in samples(a.alphabet(), 50, 1) {
            assert_eq!(accepts_regular_tree(&i, &t).unwrap(), accepts_regular_tree(&a, &t).unwrap(), "{f}");
        }
    }
}

#[test]
fn root_a_and_root_b_are_disjoint() {
    let i = intersection(&fixture("root_a"), &root_b()).unwrap();
    assert!(is_empty(&i).0);
}

#[test]
fn root_a_meets_contains_b_with_checked_witness() {
    let i = intersection(&fixture("root_a"), &fixture("contains_b")).unwrap();
    let (empty, witness) = is_empty(&i);
    assert!(!empty);
    let w = witness.unwrap();
    assert_eq!(w.label(w.root()), 0);
    let b = 1;
    let reach_b = {
        let mut seen = vec![false; w.len()];
        let mut stack = vec![w.root()];
        let mut found = false;
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            found |= w.label(v) == b;
            stack.extend([w.left(v), w.right(v)]);
        }
        found
    };
    assert!(reach_b);
    assert!(accepts_regular_tree(&i, &w).unwrap());
}

#[test]
fn sampled_intersection_and_union_soundness() {
    for f in FIXTURES {
        for g in FIXTURES {
            let (a, b) = (fixture(f), fixture(g));
            if a.alphabet() != b.alphabet() {
                continue;
            }
            let i = intersection(&a, &b).unwrap();
            let u = union(&a, &b).unwrap();
            for t in samples(a.alphabet(), 100, 2) {
                let (x, y) = (accepts_regular_tree(&a, &t).unwrap(), accepts_regular_tree(&b, &t).unwrap());
                assert_eq!(accepts_regular_tree(&i, &t).unwrap(), x && y, "{f} ∩ {g}");
                assert_eq!(accepts_regular_tree(&u, &t).unwrap(), x || y, "{f} ∪ {g}");
            }
        }
    }
}

#[test]
fn alphabet_mismatch_is_an_error() {
    let abc = Alphabet::new(&["a", "b", "c"]).unwrap();
    assert!(intersection(&fixture("root_a"), &TreeAutomaton::universal(&abc)).is_err());
    assert!(union(&fixture("root_a"), &TreeAutomaton::universal(&abc)).is_err());
}

#[test]
fn union_with_empty_and_size() {
    let a = fixture("contains_b");
    let e = TreeAutomaton::empty(a.alphabet());
    let u = union(&a, &e).unwrap();
    assert_eq!(u.num_states(), a.num_states() + e.num_states() + 1);
    for t in samples(a.alphabet(), 50, 3) {
        assert_eq!(accepts_regular_tree(&u, &t).unwrap(), accepts_regular_tree(&a, &t).unwrap());
    }
}

#[test]
fn root_a_or_root_b_covers_everything() {
    let u = union(&fixture("root_a"), &root_b()).unwrap();
    for t in samples(&ab(), 100, 4) {
        assert!(accepts_regular_tree(&u, &t).unwrap());
    }
}

#[test]
fn emptiness_basics() {
    let stuck = aut("alphabet: a b\nstates: 2\ninitial: 0\npriority: 0 0\npriority: 1 0\ntrans: 1 a 1 1\n");
    assert!(is_empty(&stuck).0);
    let (empty, w) = is_empty(&TreeAutomaton::universal(&ab()));
    assert!(!empty);
    assert!(w.is_some());
}

#[test]
fn eventual_commitment_has_committing_witness() {
    // state 0 (odd) may stay on a, state 1 (even) only reads b forever
    let a = aut("alphabet: a b\nstates: 2\ninitial: 0\npriority: 0 1\npriority: 1 0\n\
                 trans: 0 a 0 0\ntrans: 0 a 1 1\ntrans: 1 b 1 1\n");
    let (empty, w) = is_empty(&a);
    assert!(!empty);
    let w = w.unwrap();
    assert!(accepts_regular_tree(&a, &w).unwrap());
    // the only accepted tree is a(b^ω, b^ω)
    assert_eq!(w.label(w.root()), 0);
    assert!(!accepts_regular_tree(&a, &tree("x = a x x")).unwrap());
    assert!(accepts_regular_tree(&a, &tree("x = a y y\ny = b y y")).unwrap());
}

#[test]
fn witness_is_accepted_on_random_automata() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let a = random_automaton(&mut rng, 3, 3);
        let (empty, w) = is_empty(&a);
        assert_eq!(empty, w.is_none());
        if let Some(w) = w {
            assert!(accepts_regular_tree(&a, &w).unwrap());
        }
    }
}

fn random_automaton(rng: &mut ChaCha8Rng, n: usize, prios: u32) -> TreeAutomaton {
    use rand::Rng;
    let priority = (0..n).map(|_| rng.gen_range(0..prios)).collect();
    let mut tr = Vec::new();
    for q in 0..n {
        for c in 0..2 {
            for _ in 0..rng.gen_range(0..3) {
                tr.push(Transition { state: q, letter: c, left: rng.gen_range(0..n), right: rng.gen_range(0..n) });
            }
        }
    }
    TreeAutomaton::new(ab(), priority, 0, tr).unwrap()
}

#[test]
fn productive_states_match_per_state_emptiness() {
    let u = TreeAutomaton::universal(&ab());
    assert!(productive_states(&u).iter().all(|&p| p));
    // chain 0 -> 1 -> 2 -> 3 where 0 also needs the dead state 4
    let chain = aut("alphabet: a b\nstates: 5\ninitial: 0\npriority: 0 0\npriority: 1 0\npriority: 2 0\npriority: 3 0\npriority: 4 0\n\
                     trans: 0 a 1 4\ntrans: 1 a 2 2\ntrans: 2 a 3 3\ntrans: 3 a 3 3\ntrans: 3 b 3 3\n");
    let prod = productive_states(&chain);
    assert_eq!(prod, vec![false, true, true, true, false]);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let a = random_automaton(&mut rng, 4, 3);
        let prod = productive_states(&a);
        for q in 0..a.num_states() {
            assert_eq!(prod[q], !is_empty(&a.with_initial(q)).0);
        }
    }
}

#[test]
fn membership_examples() {
    let all_a = RegularTree::constant(&ab(), 0);
    assert!(accepts_regular_tree(&fixture("root_a"), &all_a).unwrap());
    assert!(!accepts_regular_tree(&fixture("contains_b"), &all_a).unwrap());
    // a single b below the left child: some branch has infinitely many a
    let t = tree("x = a y z\ny = b z z\nz = a z z");
    assert!(accepts_regular_tree(&fixture("inf_a"), &t).unwrap());
    let only_b = tree("x = a y y\ny = b y y");
    assert!(!accepts_regular_tree(&fixture("inf_a"), &only_b).unwrap());
}

/// Every prefix-closed domain with paths of length below `levels`.
fn domains(levels: usize) -> Vec<Vec<Vec<Dir>>> {
    fn below(path: Vec<Dir>, levels: usize) -> Vec<Vec<Vec<Dir>>> {
        let mut out = Vec::new();
        let children = |d: Dir| {
            let mut p = path.clone();
            p.push(d);
            let mut opts = vec![Vec::new()];
            if p.len() < levels {
                opts.extend(below(p, levels));
            }
            opts
        };
        for l in children(Dir::L) {
            for r in children(Dir::R) {
                let mut dom = vec![path.clone()];
                dom.extend(l.iter().cloned());
                dom.extend(r.iter().cloned());
                out.push(dom);
            }
        }
        out
    }
    let mut all = vec![Vec::new()];
    all.extend(below(Vec::new(), levels));
    all
}

fn prefixes(alphabet: &Alphabet, levels: usize) -> Vec<FinitePrefix> {
    let mut out = Vec::new();
    for dom in domains(levels) {
        let k = alphabet.len();
        let total = k.pow(dom.len() as u32);
        for code in 0..total {
            let mut p = FinitePrefix::default();
            let mut c = code;
            for node in &dom {
                p.insert(node.clone(), c % k);
                c /= k;
            }
            out.push(p);
        }
    }
    out
}

#[test]
fn closure_agrees_with_prefix_extension_oracle() {
    for f in FIXTURES {
        let a = fixture(f);
        if a.num_states() > 3 {
            continue;
        }
        let cl = closure(&a);
        for p in prefixes(a.alphabet(), 3) {
            let basic = prefix_automaton(a.alphabet(), &p);
            let extends = !is_empty(&intersection(&basic, &a).unwrap()).0;
            let reached = !is_empty(&intersection(&basic, &cl).unwrap()).0;
            assert_eq!(extends, reached, "{f}");
        }
    }
}

#[test]
fn closure_shape_and_laws() {
    for f in FIXTURES {
        let a = fixture(f);
        let cl = closure(&a);
        assert!(cl.priorities().iter().all(|&p| p == 0), "{f}");
        assert!(productive_states(&cl).iter().all(|&p| p), "{f}");
        for t in samples(a.alphabet(), 100, 7) {
            if accepts_regular_tree(&a, &t).unwrap() {
                assert!(accepts_regular_tree(&cl, &t).unwrap(), "{f}");
            }
        }
        assert!(equivalent(&closure(&cl), &cl, Budget::default()).unwrap(), "{f}");
        assert!(included(&a, &cl, Budget::default()).unwrap(), "{f}");
    }
    let e = TreeAutomaton::empty(&ab());
    assert!(is_empty(&closure(&e)).0);
    let u = TreeAutomaton::universal(&ab());
    assert!(is_universal(&closure(&u), Budget::default()).unwrap());
    assert!(is_universal(&closure(&fixture("contains_b")), Budget::default()).unwrap());
}

#[test]
fn closure_is_monotone_on_fixtures() {
    let root_a = fixture("root_a");
    let both = intersection(&root_a, &fixture("contains_b")).unwrap();
    assert!(included(&closure(&both), &closure(&root_a), Budget::default()).unwrap());
}

#[test]
fn priority_minimization_keeps_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let a = random_automaton(&mut rng, 4, 6);
        let m = minimize_priorities(&a);
        assert!(m.max_priority() <= a.max_priority());
        for t in samples(&ab(), 30, 9) {
            assert_eq!(accepts_regular_tree(&a, &t).unwrap(), accepts_regular_tree(&m, &t).unwrap());
        }
    }
}
