//! Complementation, inclusion and equivalence.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use wadge_model::{RegularTree, State, Transition, TreeAutomaton};

use crate::engine::{refutation_automaton, Budget};
use crate::error::{AutomataError, Result};
use crate::ops::{minimize_priorities, accepting_states, accepts_regular_tree, compress_priorities, intersection, is_empty, productive_states, reduce, restrict, simplify, trim};

fn tidy(a: &TreeAutomaton) -> TreeAutomaton {
    simplify(&minimize_priorities(&simplify(&trim(a))))
}

/// Largest complement on which state merging is attempted.
const MERGE_LIMIT: usize = 1024;

/// Random trees whose acceptance profiles pick the merge candidates.
const MERGE_SAMPLES: usize = 48;

/// Automaton for the trees rejected by `a`.
pub fn complement(a: &TreeAutomaton, budget: Budget) -> Result<TreeAutomaton> {
    shrink_complement(raw_complement(a, budget)?, a, budget)
}

/// Automaton for the trees rejected by `a`, without the state-merging pass.
/// Exact, usually larger than [`complement`], and much cheaper to build; meant
/// for one-shot inclusion tests.
pub fn raw_complement(a: &TreeAutomaton, budget: Budget) -> Result<TreeAutomaton> {
    let (c, _) = refutation_automaton(a, &[vec![a.initial()]], budget)?;
    Ok(tidy(&c))
}

/// Greedily merges states of `c`, a complement of `a`. Merging two states of
/// equal priority can only enlarge the language, so a merge that stays
/// disjoint from `a` still recognizes the complement. Only states that agree
/// on a fixed sample of trees are tried.
fn shrink_complement(mut c: TreeAutomaton, a: &TreeAutomaton, budget: Budget) -> Result<TreeAutomaton> {
    if c.num_states() > MERGE_LIMIT {
        return Ok(c);
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let samples: Vec<RegularTree> =
        (0..MERGE_SAMPLES).map(|_| RegularTree::random(a.alphabet(), 6, &mut rng)).collect();
    let mut x = 0;
    while x < c.num_states() {
        let profile = |c: &TreeAutomaton| -> Result<Vec<Vec<bool>>> {
            let tables: Vec<Vec<bool>> =
                samples.iter().map(|t| accepting_states(c, t)).collect::<std::result::Result<_, _>>()?;
            Ok((0..c.num_states()).map(|q| tables.iter().map(|row| row[q]).collect()).collect())
        };
        let prof = profile(&c)?;
        let mut merged_any = false;
        for y in x + 1..c.num_states() {
            if c.priority(x) != c.priority(y) || prof[x] != prof[y] {
                continue;
            }
            budget.check_time()?;
            let merged = merge_states(&c, x, y);
            if is_empty(&intersection(&merged, a)?).0 {
                c = tidy(&merged);
                merged_any = true;
                break;
            }
        }
        if !merged_any {
            x += 1;
        }
    }
    Ok(c)
}

/// `a` with state `y` folded into `x`.
fn merge_states(a: &TreeAutomaton, x: State, y: State) -> TreeAutomaton {
    let map = |q: State| match q {
        q if q == y => x,
        q if q > y => q - 1,
        q => q,
    };
    let mut transitions: Vec<Transition> = a
        .transitions()
        .iter()
        .map(|t| Transition { state: map(t.state), letter: t.letter, left: map(t.left), right: map(t.right) })
        .collect();
    transitions.sort_unstable_by_key(|t| (t.state, t.letter, t.left, t.right));
    transitions.dedup();
    let priority = (0..a.num_states()).filter(|&q| q != y).map(|q| a.priority(q)).collect();
    TreeAutomaton::new(a.alphabet().clone(), priority, map(a.initial()), transitions).expect("merged automaton is well formed")
}

/// Automaton for the trees accepted from every state of `states`.
pub fn conjunction(a: &TreeAutomaton, states: &[State]) -> TreeAutomaton {
    let mut acc: Option<TreeAutomaton> = None;
    for &q in states {
        let part = a.with_initial(q);
        acc = Some(match acc {
            None => tidy(&part),
            Some(x) => tidy(&intersection(&x, &part).expect("same alphabet")),
        });
    }
    acc.unwrap_or_else(|| TreeAutomaton::universal(a.alphabet()))
}

/// Automaton for the trees accepted from every state of `pos` and rejected
/// from every state of `neg`.
pub fn state_combination(a: &TreeAutomaton, pos: &[State], neg: &[State], budget: Budget) -> Result<TreeAutomaton> {
    let (r, _) = refutation_automaton(a, &[neg.to_vec()], budget)?;
    Ok(tidy(&intersection(&conjunction(a, pos), &r)?))
}

/// A tree of `L(a) \ L(b)`, if any.
pub fn difference_witness(a: &TreeAutomaton, b: &TreeAutomaton, budget: Budget) -> Result<Option<RegularTree>> {
    let d = intersection(a, &raw_complement(b, budget)?)?;
    Ok(is_empty(&d).1)
}

/// `L(a) ⊆ L(b)`.
pub fn included(a: &TreeAutomaton, b: &TreeAutomaton, budget: Budget) -> Result<bool> {
    Ok(difference_witness(a, b, budget)?.is_none())
}

pub fn equivalent(a: &TreeAutomaton, b: &TreeAutomaton, budget: Budget) -> Result<bool> {
    Ok(included(a, b, budget)? && included(b, a, budget)?)
}

pub fn is_universal(a: &TreeAutomaton, budget: Budget) -> Result<bool> {
    Ok(is_empty(&raw_complement(a, budget)?).0)
}

/// The state sets `{q : t ∈ L(a, q)}` realized by some tree, as bitmasks in
/// increasing order, each with an automaton for its class of trees.
pub fn realized_types(a: &TreeAutomaton, budget: Budget) -> Result<Vec<(u64, TreeAutomaton)>> {
    let n = a.num_states();
    assert!(n < 64);
    let full = (1u64 << n) - 1;
    let members = |m: u64| -> Vec<State> { (0..n).filter(|&i| m >> i & 1 == 1).collect() };
    let starts: Vec<Vec<State>> = (0..=full).map(|m| members(full & !m)).collect();
    let (refute, init) = refutation_automaton(a, &starts, budget)?;
    let alive = productive_states(&refute);
    let mut out = Vec::new();
    for m in 0..=full {
        let r = init[m as usize];
        if !alive[r] {
            continue;
        }
        budget.check_time()?;
        let refuted = compress_priorities(&reduce(&restrict(&refute.with_initial(r), &alive)));
        let class = tidy(&intersection(&conjunction(a, &members(m)), &refuted)?);
        if !is_empty(&class).0 {
            out.push((m, class));
        }
    }
    Ok(out)
}

/// Accepts a user-supplied complement `c` of `a` after checking that the two
/// languages are disjoint and that exactly one of them accepts each of
/// `samples` random regular trees. The sampling half is best effort.
pub fn assisted_complement<R: Rng + ?Sized>(
    a: &TreeAutomaton,
    c: &TreeAutomaton,
    samples: usize,
    rng: &mut R,
) -> Result<TreeAutomaton> {
    let (empty, witness) = is_empty(&intersection(a, c)?);
    if !empty {
        return Err(AutomataError::NotDisjoint { witness: witness.expect("nonempty witness") });
    }
    for _ in 0..samples {
        let t = RegularTree::random(a.alphabet(), 6, rng);
        let (x, y) = (accepts_regular_tree(a, &t)?, accepts_regular_tree(c, &t)?);
        if x == y {
            let accepted_by = if x { "both" } else { "neither" };
            return Err(AutomataError::SamplingContradiction { tree: t, accepted_by });
        }
    }
    Ok(c.clone())
}
