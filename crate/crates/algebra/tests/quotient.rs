mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wadge_algebra::*;
use wadge_automata::{accepts_regular_tree, Budget};
use wadge_model::{RegularTree, TreeAutomaton};

fn stage(a: &TreeAutomaton) -> StageOne {
    stage_one_algebra(a, &Limits::default()).unwrap()
}

#[test]
fn root_a_has_two_tree_classes() {
    let q = syntactic("root_a");
    assert_eq!(q.algebra.num_tree_types(), 2);
    assert_eq!(q.algebra.accepting().iter().filter(|&&x| x).count(), 1);
}

#[test]
fn plugging_tree_automaton_examples() {
    for f in FIXTURES {
        let a = fixture(f);
        let s = stage(&a);
        let ext = a.alphabet().extended().unwrap();
        let hole = plug(&ext, &[], Tail::Port);
        for &h in &s.tree_types {
            let c = plugging_automaton_tree(&a, h).unwrap();
            assert_eq!(accepts_regular_tree(&c, &hole).unwrap(), h >> a.initial() & 1 == 1, "{f}");
            for t in samples(a.alphabet(), 30, 5) {
                assert_eq!(accepts_regular_tree(&c, &t.over(&ext)).unwrap(), accepts_regular_tree(&a, &t).unwrap(), "{f}");
            }
        }
    }
}

#[test]
fn plugging_tree_automaton_matches_tables() {
    for f in FIXTURES {
        let a = fixture(f);
        let s = stage(&a);
        let alg = &s.algebra;
        let ext = a.alphabet().extended().unwrap();
        let type_of = |t: &RegularTree| s.type_of(t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (hi, &h) in s.tree_types.iter().enumerate() {
            let c = plugging_automaton_tree(&a, h).unwrap();
            for _ in 0..15 {
                // one port at the end of a path
                let path = random_context(a.alphabet(), 3, &mut rng);
                let v = table_type(alg, &path, type_of);
                let ext_path: Vec<Step> = path.iter().map(|st| Step { side: st.side.over(&ext), ..st.clone() }).collect();
                let d = plug(&ext, &ext_path, Tail::Port);
                assert_eq!(accepts_regular_tree(&c, &d).unwrap(), alg.is_accepting(alg.act(v, hi)), "{f}");
            }
            // two ports: letter(□, □)
            for letter in a.alphabet().letters() {
                let d = RegularTree::new(ext.clone(), vec![(letter, 1, 1), (ext.index("PORT").unwrap(), 2, 2), (ext.index("PAD").unwrap(), 2, 2)], 0).unwrap();
                let expected = alg.is_accepting(alg.act(alg.inject_left(letter, hi), hi));
                assert_eq!(accepts_regular_tree(&c, &d).unwrap(), expected, "{f}");
            }
        }
    }
}

#[test]
fn plugging_context_automaton_matches_tables() {
    for f in FIXTURES {
        let a = fixture(f);
        let s = stage(&a);
        let alg = &s.algebra;
        let ext = a.alphabet().extended().unwrap();
        let type_of = |t: &RegularTree| s.type_of(t).unwrap();
        let (port, pad) = (ext.index("PORT").unwrap(), ext.index("PAD").unwrap());
        let chain = RegularTree::new(ext.clone(), vec![(port, 0, 1), (pad, 1, 1)], 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (vi, &v) in s.context_types.iter().enumerate() {
            let d = plugging_automaton_context(&a, &s.layout, v).unwrap();
            // port-free environments are judged by the language alone
            for t in samples(a.alphabet(), 6, 8) {
                assert_eq!(accepts_regular_tree(&d, &t.over(&ext)).unwrap(), accepts_regular_tree(&a, &t).unwrap(), "{f}");
            }
            // all-port left spine: v^∞
            assert_eq!(accepts_regular_tree(&d, &chain).unwrap(), alg.is_accepting(alg.omega(vi)), "{f} v{vi}");
            // C · port · t
            for _ in 0..6 {
                let path = random_context(a.alphabet(), 2, &mut rng);
                let t = RegularTree::random(a.alphabet(), 4, &mut rng);
                let u = table_type(alg, &path, type_of);
                let ext_path: Vec<Step> = path.iter().map(|st| Step { side: st.side.over(&ext), ..st.clone() }).collect();
                let e = plug(&ext, &ext_path, Tail::EnvPort(&t.over(&ext)));
                let expected = alg.is_accepting(alg.act(alg.compose(u, vi), type_of(&t)));
                assert_eq!(accepts_regular_tree(&d, &e).unwrap(), expected, "{f}");
            }
        }
    }
}

#[test]
fn moore_prepartition_does_not_change_the_result() {
    for f in ["root_a", "contains_b", "spine_finite_non_c"] {
        let s = stage(&fixture(f));
        let fast = compute_equivalence(&s, Budget::default(), true).unwrap();
        let slow = compute_equivalence(&s, Budget::default(), false).unwrap();
        assert_eq!(fast, slow, "{f}");
    }
}

#[test]
fn accepting_types_are_never_merged_with_rejecting_ones() {
    for f in FIXTURES {
        let q = syntactic(f);
        let st = &q.stage.algebra;
        for x in 0..st.num_tree_types() {
            for y in 0..st.num_tree_types() {
                if q.tree_projection[x] == q.tree_projection[y] {
                    assert_eq!(st.is_accepting(x), st.is_accepting(y), "{f}");
                }
            }
        }
    }
}

#[test]
fn projection_is_a_homomorphism() {
    for f in FIXTURES {
        let q = syntactic(f);
        let (st, alg) = (&q.stage.algebra, &q.algebra);
        let pv = |v: usize| q.project_context(v);
        assert_eq!(alg.violations(5), Vec::<String>::new(), "{f}");
        for x in 0..=st.num_context_types() {
            for y in 0..=st.num_context_types() {
                assert_eq!(pv(st.compose(x, y)), alg.compose(pv(x), pv(y)), "{f}");
            }
            for h in 0..st.num_tree_types() {
                assert_eq!(q.tree_projection[st.act(x, h)], alg.act(pv(x), q.tree_projection[h]), "{f}");
            }
            if x < st.num_context_types() {
                assert_eq!(q.tree_projection[st.omega(x)], alg.omega(pv(x)), "{f}");
            }
        }
        for a in 0..st.num_letters() {
            for h in 0..st.num_tree_types() {
                assert_eq!(pv(st.inject_left(a, h)), alg.inject_left(a, q.tree_projection[h]), "{f}");
                assert_eq!(pv(st.inject_right(a, h)), alg.inject_right(a, q.tree_projection[h]), "{f}");
            }
        }
        // surjective
        for c in 0..alg.num_tree_types() {
            assert!(q.tree_projection.contains(&c));
        }
        for c in 0..alg.num_context_types() {
            assert!(q.context_projection.contains(&c));
        }
    }
}

#[test]
fn identity_partition_gives_an_isomorphic_algebra() {
    let s = stage(&fixture("spine_finite_non_c"));
    let before = s.algebra.clone();
    let p = Partition::identity(&s);
    let q = quotient(s, &p).unwrap();
    assert_eq!(q.algebra, before);
}

#[test]
fn non_congruences_are_rejected() {
    // merging the two tree types of root_a breaks the accepting set
    let s = stage(&fixture("root_a"));
    let p = Partition { tree: vec![0, 0], context: (0..s.algebra.num_context_types()).collect() };
    assert!(matches!(quotient(s, &p), Err(AlgebraError::Inconsistent(_))));
}

#[test]
fn recognition_is_preserved() {
    for f in FIXTURES {
        let q = syntactic(f);
        let a = &q.stage.automaton;
        for t in samples(a.alphabet(), 120, 9) {
            let h = q.tree_projection[q.stage.type_of(&t).unwrap()];
            assert_eq!(accepts_regular_tree(a, &t).unwrap(), q.algebra.is_accepting(h), "{f}");
            for (c, class) in q.classes.iter().enumerate() {
                assert_eq!(accepts_regular_tree(class, &t).unwrap(), c == h, "{f}");
            }
        }
    }
}

#[test]
fn language_quotients() {
    let q = syntactic("root_a");
    let alg = &q.algebra;
    assert_eq!(alg.language_quotient(alg.unit()), alg.accepting());
    // under an a-root everything is accepted, under a b-root nothing
    for h in 0..alg.num_tree_types() {
        assert!(alg.language_quotient(alg.inject_left(0, h)).iter().all(|&x| x));
        assert!(alg.language_quotient(alg.inject_left(1, h)).iter().all(|&x| !x));
    }
    for f in FIXTURES {
        let alg = &syntactic(f).algebra;
        for v in 0..=alg.num_context_types() {
            for u in 0..=alg.num_context_types() {
                let direct = alg.language_quotient(alg.compose(v, u));
                let chained: Vec<bool> = (0..alg.num_tree_types()).map(|h| alg.language_quotient(v)[alg.act(u, h)]).collect();
                assert_eq!(direct, chained, "{f}");
            }
        }
    }
}

#[test]
fn distinct_tree_classes_are_separated_by_small_terms() {
    for f in FIXTURES {
        let alg = &syntactic(f).algebra;
        let n = alg.num_tree_types();
        // the unit and products of at most two one-step injections
        let mut contexts = vec![alg.unit()];
        for a in 0..alg.num_letters() {
            for h in 0..n {
                for g in [alg.inject_left(a, h), alg.inject_right(a, h)] {
                    contexts.push(g);
                    for b in 0..alg.num_letters() {
                        for k in 0..n {
                            contexts.push(alg.compose(g, alg.inject_left(b, k)));
                            contexts.push(alg.compose(g, alg.inject_right(b, k)));
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                // terms in which the argument occurs once, twice, or infinitely often
                let terms = |h: usize| -> Vec<bool> {
                    let mut out: Vec<usize> = contexts.iter().map(|&v| alg.act(v, h)).collect();
                    for a in 0..alg.num_letters() {
                        out.push(alg.act(alg.inject_left(a, h), h));
                        for o in [alg.omega(alg.inject_left(a, h)), alg.omega(alg.inject_right(a, h))] {
                            out.extend(contexts.iter().map(|&v| alg.act(v, o)));
                        }
                    }
                    out.into_iter().map(|t| alg.is_accepting(t)).collect()
                };
                let separated = terms(x) != terms(y);
                assert!(separated, "{f}: h{x} and h{y}");
            }
        }
    }
}

#[test]
fn syntactic_dump_lists_projections() {
    let d = syntactic("contains_b").dump();
    assert!(d.contains("tree_projection 0 1"));
    assert!(d.contains("context_projection"));
}
