mod common;

use common::*;
use wadge_algebra::{Limits, Tables, ThinAlgebra};
use wadge_classify::{check_eq_bool, check_eq_limit, classify, ClassifyError, Options, Orientation, SCHEMA_VERSION};
use wadge_games::{wins_v_types, TypeGames};

fn trivial_algebra() -> ThinAlgebra {
    ThinAlgebra::new(Tables {
        compose: vec![vec![0]],
        act: vec![vec![0]],
        omega: vec![0],
        inject_left: vec![vec![0]],
        inject_right: vec![vec![0]],
        accepting: vec![true],
    })
    .unwrap()
}

fn ok(_: &[usize]) -> Result<bool, ()> {
    Ok(true)
}

#[test]
fn one_element_algebra_satisfies_both_identities() {
    let alg = trivial_algebra();
    assert!(check_eq_bool(&alg, ok).unwrap().holds);
    assert!(check_eq_limit(&alg, ok).unwrap().holds);
}

#[test]
fn oracle_errors_propagate() {
    let alg = trivial_algebra();
    assert_eq!(check_eq_bool(&alg, |_: &[usize]| Err::<bool, _>("boom")).unwrap_err(), "boom");
}

#[test]
fn root_a_identities_hold_exhaustively() {
    let syn = syntactic("root_a");
    let g = TypeGames::new(syn).unwrap();
    let r = check_eq_bool(&syn.algebra, |w: &[usize]| g.wins_v(w)).unwrap();
    assert!(r.holds && r.instances > 0);
    assert!(check_eq_limit(&syn.algebra, |w: &[usize]| g.wins_v(w)).unwrap().holds);
}

#[test]
fn identity_verdicts_do_not_depend_on_search_order() {
    // brute force with the membership table read in reverse order
    for f in ["contains_b", "inf_a", "spine_contains_c"] {
        let syn = syntactic(f);
        let g = TypeGames::new(syn).unwrap();
        let alg = &syn.algebra;
        let n = alg.num_context_types();
        let bool_holds = check_eq_bool(alg, |w: &[usize]| g.wins_v(w)).unwrap().holds;
        let mut reverse = true;
        for u in (0..n).rev() {
            for v in (0..n).rev() {
                for w in (0..n).rev() {
                    if g.wins_v(&[u, v, w]).unwrap() || g.wins_v(&[w, v, u]).unwrap() {
                        let (us, ws) = (alg.sharp_power(u), alg.sharp_power(w));
                        let side = |x| alg.compose(alg.compose(us, x), ws);
                        reverse &= side(u) == side(v) && side(v) == side(w);
                    }
                }
            }
        }
        assert_eq!(bool_holds, reverse, "{f}");
    }
}

#[test]
fn reports_satisfy_their_invariants() {
    for f in ["root_a", "contains_b", "spine_contains_c"] {
        let r = classify(&fixture(f), &Options::default()).unwrap();
        assert_eq!(r.verdicts.boolean_combination, r.eq_bool.holds && r.eq_limit.holds);
        assert_eq!(r.verdicts.delta2, r.eq_limit.holds);
        assert!(r.consistency.all(), "{f}: {:?}", r.consistency);
        if r.difference_level.language.is_some() {
            assert!(r.verdicts.boolean_combination);
        }
    }
}

#[test]
fn report_json_is_stable() {
    let a = fixture("contains_b");
    let r1 = classify(&a, &Options::default()).unwrap().to_json();
    let r2 = classify(&a, &Options::default()).unwrap().to_json();
    assert_eq!(r1, r2);
    let v: serde_json::Value = serde_json::from_str(&r1).unwrap();
    for key in ["schema_version", "algebra", "eq_bool", "eq_limit", "verdicts", "difference_level", "consistency", "timing_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["timing_ms"].is_null());
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    let timed = classify(&a, &Options { timing: true, ..Options::default() }).unwrap();
    assert!(timed.timing_ms.is_some());
}

#[test]
fn contains_b_levels() {
    let r = classify(&fixture("contains_b"), &Options::default()).unwrap();
    assert_eq!((r.difference_level.language, r.difference_level.complement), (Some(1), Some(2)));
}

#[test]
fn spine_violation_replays() {
    let r = classify(&fixture("spine_contains_c"), &Options::default()).unwrap();
    let x = r.eq_bool.violation.expect("eq-bool fails on the spine language");
    let word = match x.orientation {
        Orientation::Forward => [x.u, x.v, x.w],
        Orientation::Backward => [x.w, x.v, x.u],
    };
    assert!(wins_v_types(syntactic("spine_contains_c"), &word).unwrap());
}

#[test]
fn caps_report_partial_progress() {
    let opts = Options { limits: Limits { max_states: 2, ..Limits::default() }, ..Options::default() };
    match classify(&fixture("spine_contains_c"), &opts) {
        Err(ClassifyError::ResourceCap { stage, completed, algebra, .. }) => {
            assert_eq!(stage, "algebra");
            assert!(completed.is_empty() && algebra.is_none());
        }
        other => panic!("expected a cap, got {other:?}"),
    }
}
