//! Reference toolchain for ASP-Core answer-set programs together with a
//! competition harness.
//!
//! * [`parser`] reads programs, queries and witnesses; [`grounder`]
//!   instantiates them; [`semantics`] computes answer sets and cautious
//!   consequences.
//! * [`harness`] runs external solvers under time and memory limits,
//!   [`verification`] checks and classifies their answers, and [`scoring`]
//!   turns outcomes into per-problem and per-track points.

pub mod grounder;
pub mod harness;
pub mod model;
pub mod parser;
pub mod random;
pub mod scoring;
pub mod semantics;
pub mod verification;

pub use grounder::{ground_program, GroundProgram, Grounder, HerbrandUniverse};
pub use model::{
    Atom, ClassicalLiteral, Interpretation, ModelError, NafLiteral, Program, Query, Rule, Term,
};
pub use parser::{parse_program, parse_query, print_program, scramble, ScrambleMap};
pub use scoring::{Category, ProblemType, ScoreBreakdown, ScoringConfig};
pub use semantics::{
    brute_force_answer_sets, cautious_entails, enumerate_answer_sets, is_answer_set,
    AnswerSetResult,
};
pub use verification::{CheckerVerdict, OutcomeKind};
