//! Solver output protocol.
//!
//! ```text
//! ANSWER
//! p(1) -q(2)
//! COST 7          (optional)
//! OPTIMUM         (optional)
//! ```
//!
//! or the single line `INCONSISTENT`. Query problems print `true` or
//! `false`. A solver may print several blocks; the last complete one wins.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::ClassicalLiteral;
use crate::parser::parse_ground_literals;
use crate::scoring::ProblemType;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnswerKind {
    Witness,
    Unsat,
    Query { answer: bool },
    Malformed { reason: String },
}

/// What a solver claimed, without the witness literals themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSummary {
    #[serde(flatten)]
    pub kind: AnswerKind,
    pub cost: Option<u64>,
    pub optimum_claimed: bool,
}

impl AnswerSummary {
    pub fn malformed(reason: impl Into<String>) -> Self {
        AnswerSummary {
            kind: AnswerKind::Malformed {
                reason: reason.into(),
            },
            cost: None,
            optimum_claimed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverAnswer {
    pub summary: AnswerSummary,
    /// Witness literals as printed; may be inconsistent.
    pub witness: Vec<ClassicalLiteral>,
}

impl SolverAnswer {
    fn of(kind: AnswerKind) -> Self {
        SolverAnswer {
            summary: AnswerSummary {
                kind,
                cost: None,
                optimum_claimed: false,
            },
            witness: Vec::new(),
        }
    }

    fn malformed(reason: impl Into<String>) -> Self {
        SolverAnswer {
            summary: AnswerSummary::malformed(reason),
            witness: Vec::new(),
        }
    }

    /// Contents handed to a checker: the witness line, or `true`/`false`.
    pub fn witness_file(&self) -> Option<String> {
        match self.summary.kind {
            AnswerKind::Witness => Some(format_witness(&self.witness)),
            AnswerKind::Query { answer } => Some(format!("{answer}\n")),
            _ => None,
        }
    }
}

/// One line of space-separated literals.
pub fn format_witness(literals: &[ClassicalLiteral]) -> String {
    let mut out = String::new();
    for (i, l) in literals.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{l}");
    }
    out.push('\n');
    out
}

pub fn parse_solver_output(text: &str, problem_type: ProblemType) -> SolverAnswer {
    if problem_type == ProblemType::Query {
        return parse_query_output(text);
    }
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    let mut best: Option<SolverAnswer> = None;
    let mut i = 0;
    while i < lines.len() {
        match lines[i] {
            "" => i += 1,
            "INCONSISTENT" => {
                best = Some(SolverAnswer::of(AnswerKind::Unsat));
                i += 1;
            }
            "ANSWER" => {
                // the literal line may be blank (empty answer set)
                let Some(line) = lines.get(i + 1) else {
                    break;
                };
                let witness = match parse_ground_literals(line) {
                    Ok(w) => w,
                    Err(e) => {
                        return SolverAnswer::malformed(format!("bad witness line {}: {e}", i + 2))
                    }
                };
                let mut answer = SolverAnswer {
                    witness,
                    ..SolverAnswer::of(AnswerKind::Witness)
                };
                i += 2;
                if let Some(n) = lines.get(i).and_then(|l| l.strip_prefix("COST ")) {
                    match n.trim().parse::<u64>() {
                        Ok(c) => answer.summary.cost = Some(c),
                        Err(_) => {
                            return SolverAnswer::malformed(format!("bad cost on line {}", i + 1))
                        }
                    }
                    i += 1;
                }
                if lines.get(i) == Some(&"OPTIMUM") {
                    answer.summary.optimum_claimed = true;
                    i += 1;
                }
                best = Some(answer);
            }
            other => {
                return SolverAnswer::malformed(format!(
                    "unexpected line {}: `{}`",
                    i + 1,
                    truncate(other)
                ));
            }
        }
    }
    best.unwrap_or_else(|| SolverAnswer::malformed("no complete answer"))
}

fn parse_query_output(text: &str) -> SolverAnswer {
    let mut answer = None;
    for (n, line) in text.lines().map(str::trim).enumerate() {
        match line {
            "" => {}
            "true" => answer = Some(true),
            "false" => answer = Some(false),
            other => {
                return SolverAnswer::malformed(format!(
                    "unexpected line {}: `{}`",
                    n + 1,
                    truncate(other)
                ))
            }
        }
    }
    match answer {
        Some(answer) => SolverAnswer::of(AnswerKind::Query { answer }),
        None => SolverAnswer::malformed("no query answer"),
    }
}

fn truncate(s: &str) -> String {
    s.chars().take(60).collect()
}
