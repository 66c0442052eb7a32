//! The `wadge` command line: classification, level search, algebra dumps,
//! game queries, complement checks and an interactive game trace.
//!
//! Exit codes: 0 success, 1 a check found a violation, 2 bad input,
//! 3 a resource cap was hit.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wadge_algebra::{stage_one_algebra, syntactic_algebra, AlgebraError, Limits};
use wadge_automata::{
    accepts_regular_tree, assisted_complement, complement, difference_witness, is_empty, AutomataError, Budget,
};
use wadge_classify::{classify, ClassifyError, Options};
use wadge_games::{difference_level, extract_round_witness, w_chain, wins_h_inout, GameError, TypeGames};
use wadge_model::{FinitePrefix, ModelError, RegularTree, TreeAutomaton};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

const FORMATS: &str = "\
Automaton files (.aut), one item per line, `#` starts a comment:
  alphabet: a b c
  states: N
  initial: Q
  priority: Q P          one line per state, max-even parity
  trans: Q LETTER QL QR  one line per transition
Tree files (.tree), a finite rooted graph whose unfolding is the tree:
  vertex: ID LETTER LEFT RIGHT
  root: ID
Prefixes (play): space separated NODE=LETTER items, NODE is eps or a word over L R,
  e.g. `eps=a L=b LR=c`";

#[derive(Parser, Debug)]
#[command(name = "wadge", about = "Low Borel and Wadge levels of regular tree languages", after_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// write the report, witness or automaton to this file
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// seed of the single generator behind all sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// include wall-clock times in reports
    #[arg(long, global = true)]
    timing: bool,
    /// largest automaton accepted by the algebra construction
    #[arg(long, global = true, default_value_t = Limits::default().max_states)]
    max_states: usize,
    /// cap on stage-one context types
    #[arg(long, global = true, default_value_t = Limits::default().max_context_types)]
    max_context_types: usize,
    /// cap on states of determinized constructions
    #[arg(long, global = true, default_value_t = Budget::default().max_states)]
    max_det_states: usize,
    /// give up after this many seconds
    #[arg(long, global = true)]
    timeout: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full classification report as JSON
    Classify {
        aut: PathBuf,
        #[arg(long, default_value_t = Options::default().max_n)]
        max_n: usize,
    },
    /// Least difference level of the language and of its complement
    Level {
        aut: PathBuf,
        #[arg(long)]
        max_n: usize,
    },
    /// Dump the stage-one algebra, or the syntactic algebra
    Algebra {
        aut: PathBuf,
        #[arg(long)]
        syntactic: bool,
    },
    /// Decide a type game or the in/out game
    Game {
        aut: PathBuf,
        /// syntactic tree type indices, e.g. 3,1,3
        #[arg(long, value_delimiter = ',', conflicts_with = "inout", required_unless_present = "inout")]
        seq: Option<Vec<usize>>,
        /// number of rounds alternating between the language and its complement
        #[arg(long)]
        inout: Option<usize>,
    },
    /// Print the complement, or check a candidate complement
    Complement {
        aut: PathBuf,
        #[arg(long)]
        check: Option<PathBuf>,
        #[arg(long, default_value_t = 200, requires = "check")]
        samples: usize,
    },
    /// Play the in/out game as Constrainer against the tool
    Play {
        aut: PathBuf,
        #[arg(long)]
        rounds: usize,
    },
}

/// Runs one invocation and returns its exit code.
pub fn run(args: Vec<String>, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if !e.use_stderr() {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = writeln!(err, "{}\n{FORMATS}", e.render());
            return EXIT_INPUT;
        }
    };
    match dispatch(&cli, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    fn automata(e: &AutomataError) -> i32 {
        match e {
            AutomataError::ResourceCap { .. } | AutomataError::Deadline => EXIT_CAP,
            AutomataError::Model(_) => EXIT_INPUT,
            _ => EXIT_VIOLATION,
        }
    }
    fn algebra(e: &AlgebraError) -> i32 {
        match e {
            AlgebraError::TooLarge(_) => EXIT_CAP,
            AlgebraError::Automata(a) => automata(a),
            AlgebraError::Model(_) => EXIT_INPUT,
            AlgebraError::Inconsistent(_) => EXIT_VIOLATION,
        }
    }
    for cause in e.chain() {
        if let Some(c) = cause.downcast_ref::<ClassifyError>() {
            return match c {
                ClassifyError::ResourceCap { .. } => EXIT_CAP,
                ClassifyError::Inconsistent(_) => EXIT_VIOLATION,
                ClassifyError::Model(_) | ClassifyError::Failed { .. } => EXIT_INPUT,
            };
        }
        if let Some(g) = cause.downcast_ref::<GameError>() {
            return match g {
                GameError::Automata(a) => automata(a),
                GameError::Algebra(a) => algebra(a),
                _ => EXIT_INPUT,
            };
        }
        if let Some(a) = cause.downcast_ref::<AlgebraError>() {
            return algebra(a);
        }
        if let Some(a) = cause.downcast_ref::<AutomataError>() {
            return automata(a);
        }
    }
    EXIT_INPUT
}

fn limits(cli: &Cli) -> Limits {
    let mut budget = Budget { max_states: cli.max_det_states, ..Budget::default() };
    if let Some(secs) = cli.timeout {
        budget = budget.with_deadline(Instant::now() + Duration::from_secs(secs));
    }
    Limits { max_states: cli.max_states, max_context_types: cli.max_context_types, budget }
}

fn load(path: &Path) -> Result<TreeAutomaton> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    TreeAutomaton::parse(&text).with_context(|| format!("in {}", path.display()))
}

/// Writes to `--out` when given, to `out` otherwise.
fn emit(cli: &Cli, out: &mut dyn Write, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => Ok(write!(out, "{text}")?),
    }
}

/// Emits a witness tree after checking it against the languages it is
/// claimed to belong to (`true`) or avoid (`false`).
fn emit_witness(cli: &Cli, out: &mut dyn Write, t: &RegularTree, claims: &[(&TreeAutomaton, bool)]) -> Result<()> {
    for &(a, member) in claims {
        if accepts_regular_tree(a, t)? != member {
            bail!(ClassifyError::Inconsistent("witness tree does not replay".into()));
        }
    }
    match &cli.out {
        Some(p) => {
            fs::write(p, t.serialize()).with_context(|| format!("cannot write {}", p.display()))?;
            writeln!(out, "witness written to {}", p.display())?;
        }
        None => write!(out, "witness:\n{}", t.serialize())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32> {
    let limits = limits(cli);
    match &cli.command {
        Command::Classify { aut, max_n } => {
            let a = load(aut)?;
            let opts = Options { max_n: *max_n, limits, timing: cli.timing, ..Options::default() };
            let report = classify(&a, &opts)?;
            let json = report.to_json() + "\n";
            emit(cli, out, &json)?;
            if cli.out.is_some() {
                let level = |l: Option<usize>| l.map_or("none".to_string(), |n| n.to_string());
                writeln!(
                    out,
                    "BC {}, delta2 {}, level {} (complement {})",
                    yes(report.verdicts.boolean_combination),
                    yes(report.verdicts.delta2),
                    level(report.difference_level.language),
                    level(report.difference_level.complement)
                )?;
            }
        }
        Command::Level { aut, max_n } => {
            let a = load(aut)?;
            let c = complement(&a, limits.budget)?;
            let mut text = String::new();
            for (name, x, y) in [("language", &a, &c), ("complement", &c, &a)] {
                text += &match difference_level(x, y, *max_n)? {
                    Some(n) => format!("{name}: level {n}\n"),
                    None => format!("{name}: no level up to {max_n}\n"),
                };
            }
            emit(cli, out, &text)?;
        }
        Command::Algebra { aut, syntactic } => {
            let a = load(aut)?;
            let dump = if *syntactic { syntactic_algebra(&a, &limits)?.dump() } else { stage_one_algebra(&a, &limits)?.dump() };
            emit(cli, out, &dump)?;
        }
        Command::Game { aut, seq, inout } => {
            let a = load(aut)?;
            if let Some(n) = inout {
                if *n == 0 {
                    bail!("--inout needs at least one round");
                }
                let c = complement(&a, limits.budget)?;
                let v = wins_h_inout(&a, &c, *n)?;
                writeln!(out, "{} wins H(L, Lc, ...) with {n} rounds", winner(v.alternator_wins()))?;
                if let Some(t) = &v.witness {
                    emit_witness(cli, out, t, &[(&a, true), (&v.round_languages[0], true)])?;
                }
            } else {
                let seq = seq.as_deref().unwrap_or_default();
                let syn = syntactic_algebra(&a, &limits)?;
                let k = syn.algebra.num_tree_types();
                if seq.is_empty() || seq.iter().any(|&h| h >= k) {
                    bail!("--seq needs tree type indices below {k}");
                }
                let games = TypeGames::new(&syn)?;
                let wins = games.wins_h(seq)?;
                writeln!(out, "{} wins the type game for {seq:?}", winner(wins))?;
                if wins {
                    let head = games.tree_chain_head(seq)?;
                    if let Some(t) = is_empty(&head).1 {
                        emit_witness(cli, out, &t, &[(&syn.classes[seq[0]], true)])?;
                    }
                }
            }
        }
        Command::Complement { aut, check: None, .. } => {
            let a = load(aut)?;
            emit(cli, out, &complement(&a, limits.budget)?.serialize())?;
        }
        Command::Complement { aut, check: Some(cpath), samples } => {
            let a = load(aut)?;
            let c = load(cpath)?;
            if a.alphabet() != c.alphabet() {
                bail!(ModelError::AlphabetMismatch);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let counterexample = match assisted_complement(&a, &c, *samples, &mut rng) {
                Ok(_) => difference_witness(&complement(&a, limits.budget)?, &c, limits.budget)?.map(|t| (t, "neither")),
                Err(AutomataError::NotDisjoint { witness }) => Some((witness, "both")),
                Err(AutomataError::SamplingContradiction { tree, accepted_by }) => Some((tree, accepted_by)),
                Err(e) => return Err(e.into()),
            };
            match counterexample {
                None => writeln!(out, "ok: disjoint, {samples} samples agree, and the union is universal")?,
                Some((t, by)) => {
                    writeln!(out, "violation: a tree is accepted by {by} of the two automata")?;
                    let member = by == "both";
                    emit_witness(cli, out, &t, &[(&a, member), (&c, member)])?;
                    return Ok(EXIT_VIOLATION);
                }
            }
        }
        Command::Play { aut, rounds } => {
            let a = load(aut)?;
            play(&a, *rounds, limits.budget, input, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn winner(alternator: bool) -> &'static str {
    if alternator {
        "Alternator"
    } else {
        "Constrainer"
    }
}

/// The tool plays Alternator from the W-chain; each Constrainer move is a
/// prefix of the last tree that extends the previous prefix.
fn play(a: &TreeAutomaton, rounds: usize, budget: Budget, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<()> {
    if rounds == 0 {
        bail!("--rounds needs at least one round");
    }
    let c = complement(a, budget)?;
    let langs: Vec<&TreeAutomaton> = (0..rounds).map(|i| if i % 2 == 0 { a } else { &c }).collect();
    let chain = w_chain(&langs)?;
    let alphabet = a.alphabet();
    let mut prefix = FinitePrefix::default();
    for (i, w) in chain.iter().enumerate() {
        let side = if i % 2 == 0 { "L" } else { "Lc" };
        writeln!(out, "round {} of {rounds}: W{} ⊆ {side} has {} states", i + 1, i + 1, w.num_states())?;
        let tree = match extract_round_witness(&prefix, w) {
            Ok(t) => t,
            Err(GameError::NoExtension) if i == 0 => {
                writeln!(out, "Constrainer wins: W1 is empty")?;
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        if !accepts_regular_tree(langs[i], &tree)? || !tree.extends(&prefix) {
            bail!(ClassifyError::Inconsistent("Alternator's move does not replay".into()));
        }
        write!(out, "Alternator plays:\n{}", tree.serialize())?;
        if i + 1 == rounds {
            break;
        }
        prefix = loop {
            write!(out, "prefix> ")?;
            out.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 || line.trim() == "quit" {
                writeln!(out)?;
                writeln!(out, "stopped after {} rounds", i + 1)?;
                return Ok(());
            }
            match FinitePrefix::parse(line.trim(), alphabet) {
                Ok(p) if !tree.extends(&p) => writeln!(out, "not a prefix of the last tree")?,
                Ok(p) if !prefix.is_subprefix_of(&p) => writeln!(out, "must extend the previous prefix {}", prefix.display(alphabet))?,
                Ok(p) => break p,
                Err(e) => writeln!(out, "{e}")?,
            }
        };
    }
    writeln!(out, "Alternator survived {rounds} rounds")?;
    Ok(())
}
