//! Decides whether a regular tree language is a Boolean combination of open
//! sets and whether it is Δ⁰₂, by evaluating two identities on its syntactic
//! algebra with side conditions given by the context-type game `𝒱_L`. The
//! finite difference level is found independently by the alternation game.

mod equations;
mod error;
mod report;

pub use equations::{check_eq_bool, check_eq_limit, EqBool, EqBoolViolation, EqLimit, EqLimitViolation, Orientation};
pub use error::{ClassifyError, Result};
pub use report::{
    classify, AlgebraSizes, ClassificationReport, Consistency, LevelReport, Options, Timing, Verdicts, SCHEMA_VERSION,
};
