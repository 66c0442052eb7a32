use std::collections::HashMap;
use std::fmt::Write as _;

use wadge_automata::{intersection, productive_states, raw_complement, reduce, trim, union, Budget};
use wadge_model::{validity_automaton, EncodingKind, Transition, TreeAutomaton};

use crate::error::{AlgebraError, Result};
use crate::stage_one::{stage_one_algebra, Limits, StageOne, TripleLayout};
use crate::thin::{Tables, ThinAlgebra};

/// Accepts the multicontexts `D` with `D[h] ∈ L`: it runs `a` and, at a
/// port, requires the current state to lie in `h`.
pub fn plugging_automaton_tree(a: &TreeAutomaton, h: u64) -> Result<TreeAutomaton> {
    let ext = a.alphabet().extended()?;
    let (port, pad) = (a.alphabet().len(), a.alphabet().len() + 1);
    let n = a.num_states();
    let top = n;
    let mut priority = a.priorities().to_vec();
    priority.push(0);
    let mut tr = a.transitions().to_vec();
    tr.extend((0..n).filter(|q| h >> q & 1 == 1).map(|q| Transition { state: q, letter: port, left: top, right: top }));
    tr.push(Transition { state: top, letter: pad, left: top, right: top });
    let raw = TreeAutomaton::new(ext.clone(), priority, a.initial(), tr)?;
    let valid = validity_automaton(a.alphabet(), EncodingKind::Multicontext)?;
    Ok(reduce(&trim(&intersection(&raw, &valid)?)))
}

/// Accepts the environments `E` with `E[v] ∈ L`. At a port in state `q` the
/// automaton picks `(q, ℓ, q') ∈ v` and continues on the left child in a copy
/// of `q'` whose priority is `max(ℓ, Ω(q'))`: the context's path and the
/// continuation's root are merged into one position, which leaves the largest
/// priority seen infinitely often unchanged.
pub fn plugging_automaton_context(a: &TreeAutomaton, layout: &TripleLayout, v: u128) -> Result<TreeAutomaton> {
    let ext = a.alphabet().extended()?;
    let (port, pad) = (a.alphabet().len(), a.alphabet().len() + 1);
    let n = a.num_states();
    let levels = layout.levels();
    let mid = |l: usize, q: usize| n + l * n + q;
    let top = n + levels.len() * n;
    let level = |p: u32| levels.binary_search(&p).expect("priority level");
    let mut priority = a.priorities().to_vec();
    for &p in levels {
        priority.extend((0..n).map(|q| p.max(a.priority(q))));
    }
    priority.push(0);
    let triples = layout.triples(v);
    let mut tr = Vec::new();
    let copies = (0..n).map(|q| (q, q)).chain((0..levels.len()).flat_map(|l| (0..n).map(move |q| (mid(l, q), q))));
    for (s, q) in copies {
        for t in a.transitions().iter().filter(|t| t.state == q) {
            tr.push(Transition { state: s, ..*t });
        }
        for &(_, l, r) in triples.iter().filter(|x| x.0 == q) {
            tr.push(Transition { state: s, letter: port, left: mid(level(l), r), right: top });
        }
    }
    tr.push(Transition { state: top, letter: pad, left: top, right: top });
    let raw = TreeAutomaton::new(ext, priority, a.initial(), tr)?;
    let valid = validity_automaton(a.alphabet(), EncodingKind::Environment)?;
    Ok(reduce(&trim(&intersection(&raw, &valid)?)))
}

/// Class index of every stage-one tree type and context type, numbered in
/// order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub tree: Vec<usize>,
    pub context: Vec<usize>,
}

impl Partition {
    pub fn identity(stage: &StageOne) -> Partition {
        Partition {
            tree: (0..stage.algebra.num_tree_types()).collect(),
            context: (0..stage.algebra.num_context_types()).collect(),
        }
    }

    pub fn tree_classes(&self) -> usize {
        self.tree.iter().max().map_or(0, |m| m + 1)
    }

    pub fn context_classes(&self) -> usize {
        self.context.iter().max().map_or(0, |m| m + 1)
    }
}

fn renumber<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

/// The coarsest congruence of the finite algebra that saturates the
/// accepting set. Every distinction it makes is witnessed by a term, hence by
/// a multicontext or environment, so it is coarser than or equal to the
/// syntactic equivalence.
pub fn moore_partition(alg: &ThinAlgebra) -> Partition {
    let (h, v, k) = (alg.num_tree_types(), alg.num_context_types(), alg.num_letters());
    let mut tree = renumber((0..h).map(|t| alg.is_accepting(t)));
    let mut context = vec![0; v];
    loop {
        let next_tree = renumber((0..h).map(|t| {
            let mut sig = vec![tree[t]];
            sig.extend((0..k).map(|a| context[alg.inject_left(a, t)]));
            sig.extend((0..k).map(|a| context[alg.inject_right(a, t)]));
            sig.extend((0..v).map(|x| tree[alg.act(x, t)]));
            sig
        }));
        let next_context = renumber((0..v).map(|x| {
            let mut sig = vec![context[x], tree[alg.omega(x)]];
            sig.extend((0..h).map(|t| tree[alg.act(x, t)]));
            sig.extend((0..v).map(|y| context[alg.compose(y, x)]));
            sig.extend((0..v).map(|y| context[alg.compose(x, y)]));
            sig
        }));
        let stable = next_tree == tree && next_context == context;
        tree = next_tree;
        context = next_context;
        if stable {
            return Partition { tree, context };
        }
    }
}

/// Plugging automaton of a type together with its complement, built on demand.
struct Plugged<'a> {
    build: &'a dyn Fn(u128) -> Result<TreeAutomaton>,
    budget: Budget,
    cache: HashMap<u128, (TreeAutomaton, Option<TreeAutomaton>)>,
}

impl Plugged<'_> {
    fn automaton(&mut self, x: u128) -> Result<&TreeAutomaton> {
        if !self.cache.contains_key(&x) {
            self.cache.insert(x, ((self.build)(x)?, None));
        }
        Ok(&self.cache[&x].0)
    }

    /// `L(P_x) ⊆ L(P_y)`. Plugging automata are monotone in the type, so
    /// `x ⊆ y` settles it without complementation.
    fn included(&mut self, x: u128, y: u128) -> Result<bool> {
        if x & !y == 0 {
            return Ok(true);
        }
        self.automaton(x)?;
        self.automaton(y)?;
        if self.cache[&y].1.is_none() {
            let comp = raw_complement(&self.cache[&y].0, self.budget)?;
            self.cache.get_mut(&y).unwrap().1 = Some(comp);
        }
        let d = intersection(&self.cache[&x].0, self.cache[&y].1.as_ref().unwrap())?;
        Ok(!productive_states(&d)[d.initial()])
    }
}

/// Splits every block of `coarse` by language equivalence of the plugging
/// automata. Every member includes the plugging language of the block's meet
/// (a state or triple set, realized or not), so one complement of the meet
/// decides which members are equivalent to it; the meet is abandoned after
/// its first failure. The remaining members are compared with the
/// representatives found so far.
fn refine(sets: &[u128], coarse: &[usize], budget: Budget, build: &dyn Fn(u128) -> Result<TreeAutomaton>) -> Result<Vec<usize>> {
    let mut plug = Plugged { build, budget, cache: HashMap::new() };
    let mut label: Vec<(usize, usize)> = vec![(usize::MAX, 0); sets.len()];
    let blocks = coarse.iter().max().map_or(0, |m| m + 1);
    for block in 0..blocks {
        let members: Vec<usize> = (0..sets.len()).filter(|&i| coarse[i] == block).collect();
        let meet = members.iter().fold(u128::MAX, |m, &i| m & sets[i]);
        let mut use_meet = members.len() > 1;
        let mut rest = Vec::new();
        for &x in &members {
            if use_meet && plug.included(sets[x], meet)? {
                label[x] = (block, 0);
            } else {
                use_meet = false;
                rest.push(x);
            }
        }
        let mut reps: Vec<usize> = Vec::new();
        for x in rest {
            let mut class = None;
            for (c, &r) in reps.iter().enumerate() {
                if plug.included(sets[x], sets[r])? && plug.included(sets[r], sets[x])? {
                    class = Some(c);
                    break;
                }
            }
            let c = class.unwrap_or_else(|| {
                reps.push(x);
                reps.len() - 1
            });
            label[x] = (block, c + 1);
        }
    }
    Ok(renumber(label.into_iter()))
}

/// The syntactic equivalence on stage-one tree and context types: `h ≈ h'`
/// iff their tree plugging automata are equivalent, `v ≈ v'` likewise for the
/// context plugging automata. With `prepartition`, only pairs the Moore
/// partition leaves together are compared.
pub fn compute_equivalence(stage: &StageOne, budget: Budget, prepartition: bool) -> Result<Partition> {
    let coarse = if prepartition {
        moore_partition(&stage.algebra)
    } else {
        Partition { tree: vec![0; stage.algebra.num_tree_types()], context: vec![0; stage.algebra.num_context_types()] }
    };
    let a = &stage.automaton;
    let tree_sets: Vec<u128> = stage.tree_types.iter().map(|&m| m as u128).collect();
    let tree = refine(&tree_sets, &coarse.tree, budget, &|m| plugging_automaton_tree(a, m as u64))?;
    let context =
        refine(&stage.context_types, &coarse.context, budget, &|v| plugging_automaton_context(a, &stage.layout, v))?;
    Ok(Partition { tree, context })
}

/// The syntactic algebra: the quotient thin algebra, the projections from
/// the stage-one carriers, and an automaton per syntactic tree type for its
/// class of trees.
#[derive(Clone, Debug)]
pub struct SyntacticAlgebra {
    pub algebra: ThinAlgebra,
    pub tree_projection: Vec<usize>,
    pub context_projection: Vec<usize>,
    pub classes: Vec<TreeAutomaton>,
    pub stage: StageOne,
}

impl SyntacticAlgebra {
    /// Projection of a stage-one context index, the stage-one unit going to
    /// the quotient unit.
    pub fn project_context(&self, v: usize) -> usize {
        self.context_projection.get(v).copied().unwrap_or(self.algebra.unit())
    }

    pub fn dump(&self) -> String {
        let mut s = self.algebra.dump(self.stage.automaton.alphabet().names());
        let row = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(s, "tree_projection {}", row(&self.tree_projection)).unwrap();
        writeln!(s, "context_projection {}", row(&self.context_projection)).unwrap();
        s
    }
}

/// Quotient of the stage-one algebra by `p`. Every table entry is checked on
/// all class members, so a partition that is not a congruence is reported.
pub fn quotient(stage: StageOne, p: &Partition) -> Result<SyntacticAlgebra> {
    let alg = &stage.algebra;
    let (hn, vn) = (p.tree_classes(), p.context_classes());
    let first = |part: &[usize], c: usize| part.iter().position(|&x| x == c).expect("nonempty class");
    let h_rep: Vec<usize> = (0..hn).map(|c| first(&p.tree, c)).collect();
    let v_rep: Vec<usize> = (0..vn).map(|c| first(&p.context, c)).collect();
    let tables = Tables {
        compose: v_rep.iter().map(|&x| v_rep.iter().map(|&y| p.context[alg.compose(x, y)]).collect()).collect(),
        act: v_rep.iter().map(|&x| h_rep.iter().map(|&t| p.tree[alg.act(x, t)]).collect()).collect(),
        omega: v_rep.iter().map(|&x| p.tree[alg.omega(x)]).collect(),
        inject_left: (0..alg.num_letters()).map(|a| h_rep.iter().map(|&t| p.context[alg.inject_left(a, t)]).collect()).collect(),
        inject_right: (0..alg.num_letters()).map(|a| h_rep.iter().map(|&t| p.context[alg.inject_right(a, t)]).collect()).collect(),
        accepting: h_rep.iter().map(|&t| alg.is_accepting(t)).collect(),
    };
    let q = ThinAlgebra::new(tables)?;
    let fail = |what: String| Err(AlgebraError::Inconsistent(format!("partition is not a congruence: {what}")));
    for x in 0..alg.num_context_types() {
        for y in 0..alg.num_context_types() {
            if p.context[alg.compose(x, y)] != q.compose(p.context[x], p.context[y]) {
                return fail(format!("compose(v{x}, v{y})"));
            }
        }
        for t in 0..alg.num_tree_types() {
            if p.tree[alg.act(x, t)] != q.act(p.context[x], p.tree[t]) {
                return fail(format!("act(v{x}, h{t})"));
            }
        }
        if p.tree[alg.omega(x)] != q.omega(p.context[x]) {
            return fail(format!("omega(v{x})"));
        }
    }
    for t in 0..alg.num_tree_types() {
        if alg.is_accepting(t) != q.is_accepting(p.tree[t]) {
            return fail(format!("accepting h{t}"));
        }
        for a in 0..alg.num_letters() {
            if p.context[alg.inject_left(a, t)] != q.inject_left(a, p.tree[t])
                || p.context[alg.inject_right(a, t)] != q.inject_right(a, p.tree[t])
            {
                return fail(format!("injection of h{t} under letter {a}"));
            }
        }
    }
    let mut classes = Vec::with_capacity(hn);
    for c in 0..hn {
        let mut members = (0..p.tree.len()).filter(|&t| p.tree[t] == c).map(|t| &stage.classes[t]);
        let start = members.next().expect("nonempty class").clone();
        classes.push(members.try_fold(start, |acc, m| union(&acc, m).map(|u| reduce(&u)))?);
    }
    Ok(SyntacticAlgebra {
        algebra: q,
        tree_projection: p.tree.clone(),
        context_projection: p.context.clone(),
        classes,
        stage,
    })
}

/// Stage one, Moore pre-partition, exact equivalence and quotient.
pub fn syntactic_algebra(a: &TreeAutomaton, limits: &Limits) -> Result<SyntacticAlgebra> {
    let stage = stage_one_algebra(a, limits)?;
    let p = compute_equivalence(&stage, limits.budget, true)?;
    quotient(stage, &p)
}
