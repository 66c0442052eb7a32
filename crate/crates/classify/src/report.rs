//! The full pipeline and its JSON report.

use std::time::Instant;

use serde::Serialize;
use wadge_algebra::{syntactic_algebra, AlgebraError, Limits, SyntacticAlgebra};
use wadge_automata::{complement, intersection, productive_states, AutomataError};
use wadge_games::{difference_level, wins_h_inout, wins_v_types, GameError, TypeGames};
use wadge_model::TreeAutomaton;

use crate::equations::{check_eq_bool, check_eq_limit, EqBool, EqLimit, Orientation};
use crate::error::{algebra_cap, automata_cap, game_cap, ClassifyError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Options {
    pub max_n: usize,
    pub limits: Limits,
    /// rounds up to which the alternation game is cross-checked against
    /// type sequences
    pub cross_check_rounds: usize,
    /// report wall-clock times; off by default so that reports are
    /// reproducible byte for byte
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_n: 8, limits: Limits::default(), cross_check_rounds: 4, timing: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSizes {
    pub automaton_states: usize,
    pub stage_one_tree_types: usize,
    pub stage_one_context_types: usize,
    pub tree_types: usize,
    pub context_types: usize,
    pub sharp: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    /// a Boolean combination of open sets
    pub boolean_combination: bool,
    pub delta2: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub max_n: usize,
    /// least `n ≤ max_n` with the language a difference of `n` open sets
    pub language: Option<usize>,
    pub complement: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Consistency {
    pub algebra_axioms: bool,
    pub size_bounds: bool,
    pub complement_disjoint: bool,
    pub boolean_combination_implies_delta2: bool,
    /// a finite level goes with both identities; a violated identity goes
    /// with a level search that exhausts `max_n`
    pub level_implies_boolean_combination: bool,
    pub witness_replays: bool,
    /// alternation game against `ℋ_L` type sequences, up to `cross_check_rounds`
    pub game_matches_types: bool,
}

impl Consistency {
    pub fn all(&self) -> bool {
        self.algebra_axioms
            && self.size_bounds
            && self.complement_disjoint
            && self.boolean_combination_implies_delta2
            && self.level_implies_boolean_combination
            && self.witness_replays
            && self.game_matches_types
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub algebra: f64,
    pub equations: f64,
    pub complement: f64,
    pub levels: f64,
    pub consistency: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub algebra: AlgebraSizes,
    pub eq_bool: EqBool,
    pub eq_limit: EqLimit,
    pub verdicts: Verdicts,
    pub difference_level: LevelReport,
    pub consistency: Consistency,
    pub timing_ms: Option<Timing>,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Stages {
    completed: Vec<&'static str>,
    algebra: Option<AlgebraSizes>,
}

impl Stages {
    fn fail(&self, stage: &'static str, cap: bool, message: String) -> ClassifyError {
        if cap {
            ClassifyError::ResourceCap { stage, message, completed: self.completed.clone(), algebra: self.algebra }
        } else {
            ClassifyError::Failed { stage, message }
        }
    }

    fn algebra_err(&self, stage: &'static str) -> impl Fn(AlgebraError) -> ClassifyError + '_ {
        move |e| self.fail(stage, algebra_cap(&e), e.to_string())
    }

    fn automata_err(&self, stage: &'static str) -> impl Fn(AutomataError) -> ClassifyError + '_ {
        move |e| self.fail(stage, automata_cap(&e), e.to_string())
    }

    fn game_err(&self, stage: &'static str) -> impl Fn(GameError) -> ClassifyError + '_ {
        move |e| self.fail(stage, game_cap(&e), e.to_string())
    }
}

fn sizes(a: &TreeAutomaton, syn: &SyntacticAlgebra) -> AlgebraSizes {
    AlgebraSizes {
        automaton_states: a.num_states(),
        stage_one_tree_types: syn.stage.algebra.num_tree_types(),
        stage_one_context_types: syn.stage.algebra.num_context_types(),
        tree_types: syn.algebra.num_tree_types(),
        context_types: syn.algebra.num_context_types(),
        sharp: syn.algebra.sharp(),
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Runs stage one, the syntactic quotient, the two identities, the level
/// search and the consistency checks.
pub fn classify(a: &TreeAutomaton, opts: &Options) -> Result<ClassificationReport> {
    let start = Instant::now();
    let mut stages = Stages { completed: Vec::new(), algebra: None };

    let t = Instant::now();
    let syn = syntactic_algebra(a, &opts.limits).map_err(stages.algebra_err("algebra"))?;
    let algebra = sizes(a, &syn);
    stages.algebra = Some(algebra);
    stages.completed.push("algebra");
    let t_algebra = ms(t);

    let t = Instant::now();
    let games = TypeGames::new(&syn).map_err(stages.game_err("memberships"))?;
    let member = |w: &[usize]| games.wins_v(w);
    let eq_bool = check_eq_bool(&syn.algebra, member).map_err(stages.game_err("equations"))?;
    let eq_limit = check_eq_limit(&syn.algebra, member).map_err(stages.game_err("equations"))?;
    stages.completed.push("equations");
    let t_equations = ms(t);
    let verdicts = Verdicts { boolean_combination: eq_bool.holds && eq_limit.holds, delta2: eq_limit.holds };

    let t = Instant::now();
    let c = complement(a, opts.limits.budget).map_err(stages.automata_err("complement"))?;
    stages.completed.push("complement");
    let t_complement = ms(t);

    let t = Instant::now();
    let level = |x, y| difference_level(x, y, opts.max_n).map_err(stages.game_err("levels"));
    let difference = LevelReport { max_n: opts.max_n, language: level(a, &c)?, complement: level(&c, a)? };
    stages.completed.push("levels");
    let t_levels = ms(t);

    let t = Instant::now();
    let product = intersection(a, &c)?;
    let witness_replays = match eq_bool.violation {
        None => true,
        Some(x) => {
            let word = match x.orientation {
                Orientation::Forward => [x.u, x.v, x.w],
                Orientation::Backward => [x.w, x.v, x.u],
            };
            wins_v_types(&syn, &word).map_err(stages.game_err("consistency"))?
        }
    };
    let mut game_matches_types = true;
    let alg = &syn.algebra;
    for n in 1..=opts.cross_check_rounds {
        let direct = wins_h_inout(a, &c, n).map_err(stages.game_err("consistency"))?.alternator_wins();
        let mut by_types = false;
        for w in alternating_types(alg.accepting(), n) {
            if games.wins_h(&w).map_err(stages.game_err("consistency"))? {
                by_types = true;
                break;
            }
        }
        game_matches_types &= direct == by_types;
    }
    let found = difference.language.is_some() || difference.complement.is_some();
    let consistency = Consistency {
        algebra_axioms: syn.algebra.violations(1).is_empty() && syn.stage.algebra.violations(1).is_empty(),
        size_bounds: syn.stage.within_size_bounds(),
        complement_disjoint: !productive_states(&product)[product.initial()],
        boolean_combination_implies_delta2: !verdicts.boolean_combination || verdicts.delta2,
        level_implies_boolean_combination: !found || verdicts.boolean_combination,
        witness_replays,
        game_matches_types,
    };
    let t_consistency = ms(t);

    if verdicts.boolean_combination != (eq_bool.holds && eq_limit.holds) || verdicts.delta2 != eq_limit.holds {
        return Err(ClassifyError::Inconsistent("verdicts disagree with the identities".into()));
    }
    if difference.language.is_some() && !verdicts.boolean_combination {
        return Err(ClassifyError::Inconsistent("a finite difference level was found for a language outside BC".into()));
    }
    let timing_ms = opts.timing.then(|| Timing {
        algebra: t_algebra,
        equations: t_equations,
        complement: t_complement,
        levels: t_levels,
        consistency: t_consistency,
        total: ms(start),
    });
    Ok(ClassificationReport {
        schema_version: SCHEMA_VERSION,
        algebra,
        eq_bool,
        eq_limit,
        verdicts,
        difference_level: difference,
        consistency,
        timing_ms,
    })
}

/// Tree-type words of length `n` that alternate between accepting types (odd
/// positions, counting from 1) and rejecting ones.
fn alternating_types(accepting: &[bool], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        let want = i % 2 == 0;
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..accepting.len()).filter(move |&h| accepting[h] == want).map(move |h| [w.clone(), vec![h]].concat())
            })
            .collect();
    }
    out
}
