//! Witness checking and outcome classification.
//!
//! External checkers speak a two-line protocol on stdout:
//!
//! ```text
//! OK | FAIL
//! COST <n>        (optional)
//! ```
//!
//! They are invoked as `<checker...> <instance-file> <witness-file>` and
//! exit 0 whenever the check itself completed.

use std::path::Path;
use std::process::{Command, Stdio};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::output::{AnswerKind, AnswerSummary};
use crate::harness::runner::{LimitViolation, RunRecord};
use crate::model::{Interpretation, Program};
use crate::semantics::{self, SemanticsError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckerVerdict {
    pub valid: bool,
    pub cost: Option<u64>,
    pub raw_output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OutcomeKind {
    CorrectWitness,
    CorrectUnsat,
    WrongWitness,
    WrongUnsat,
    Timeout,
    MemOut,
    Crash,
    MalformedOutput,
}

impl OutcomeKind {
    /// Counts toward `N_S`.
    pub fn is_solved(self) -> bool {
        matches!(
            self,
            OutcomeKind::CorrectWitness | OutcomeKind::CorrectUnsat
        )
    }

    /// Only incorrect answers disqualify; resource failures never do.
    pub fn disqualifies(self) -> bool {
        matches!(self, OutcomeKind::WrongWitness | OutcomeKind::WrongUnsat)
    }
}

#[derive(Debug, Error)]
pub enum CheckerError {
    #[error("failed to start checker `{command}`: {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("checker exited with {status} without a verdict: {stderr}")]
    Crash { status: String, stderr: String },
    #[error("checker output violates the protocol: {0}")]
    Protocol(String),
    #[error("checker command is empty")]
    EmptyCommand,
}

/// Parses checker stdout. Trailing blank lines are ignored.
pub fn parse_checker_output(stdout: &str) -> Result<CheckerVerdict, CheckerError> {
    let mut lines: Vec<&str> = stdout.lines().map(str::trim).collect();
    while lines.last() == Some(&"") {
        lines.pop();
    }
    let valid = match lines.first() {
        Some(&"OK") => true,
        Some(&"FAIL") => false,
        Some(other) => {
            return Err(CheckerError::Protocol(format!(
                "expected OK or FAIL, got `{other}`"
            )))
        }
        None => return Err(CheckerError::Protocol("empty output".into())),
    };
    let cost = match lines.get(1) {
        None => None,
        Some(line) => {
            let n = line
                .strip_prefix("COST ")
                .and_then(|n| n.trim().parse::<u64>().ok())
                .ok_or_else(|| {
                    CheckerError::Protocol(format!("expected `COST <n>`, got `{line}`"))
                })?;
            Some(n)
        }
    };
    if lines.len() > 2 {
        return Err(CheckerError::Protocol("more than two lines".into()));
    }
    Ok(CheckerVerdict {
        valid,
        cost,
        raw_output: stdout.to_string(),
    })
}

/// Runs `command instance witness` (in `cwd` if given) and parses its
/// verdict.
pub fn run_external_checker(
    command: &[String],
    cwd: Option<&Path>,
    instance: &Path,
    witness: &Path,
) -> Result<CheckerVerdict, CheckerError> {
    let (program, args) = command.split_first().ok_or(CheckerError::EmptyCommand)?;
    let mut cmd = Command::new(program);
    cmd.args(args)
        .arg(instance)
        .arg(witness)
        .stdin(Stdio::null());
    if let Some(dir) = cwd {
        cmd.current_dir(dir);
    }
    let output = cmd.output().map_err(|source| CheckerError::Spawn {
        command: command.join(" "),
        source,
    })?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    match parse_checker_output(&stdout) {
        Ok(v) => Ok(v),
        Err(e) if output.status.success() => Err(e),
        Err(_) => Err(CheckerError::Crash {
            status: output.status.to_string(),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        }),
    }
}

/// `witness` is an answer set of `program`.
pub fn stability_check(
    program: &Program,
    witness: &Interpretation,
) -> Result<bool, SemanticsError> {
    semantics::is_answer_set(program, witness)
}

/// Number of positive witness literals over `predicate`; the cost used by
/// the bundled optimization checker.
pub fn predicate_cost(witness: &Interpretation, predicate: &str) -> u64 {
    witness
        .iter()
        .filter(|l| !l.strongly_negated && l.atom.predicate == predicate)
        .count() as u64
}

/// Classifies one run. Pure: the same inputs always give the same kind.
///
/// `peer_evidence` is whether another system produced a checker-approved
/// witness for the same instance; it only matters for unsat claims.
pub fn classify_outcome(
    run: &RunRecord,
    answer: &AnswerSummary,
    verdict: Option<&CheckerVerdict>,
    peer_evidence: Option<bool>,
) -> OutcomeKind {
    match run.limit_violation {
        LimitViolation::Time => return OutcomeKind::Timeout,
        LimitViolation::Memory => return OutcomeKind::MemOut,
        LimitViolation::None => {}
    }
    if run.spawn_error.is_some() {
        return OutcomeKind::Crash;
    }
    match &answer.kind {
        AnswerKind::Malformed { .. } => {
            if run.exited_cleanly() {
                OutcomeKind::MalformedOutput
            } else {
                OutcomeKind::Crash
            }
        }
        AnswerKind::Unsat => {
            if peer_evidence == Some(true) {
                OutcomeKind::WrongUnsat
            } else {
                OutcomeKind::CorrectUnsat
            }
        }
        AnswerKind::Witness | AnswerKind::Query { .. } => match verdict {
            Some(v) if v.valid => OutcomeKind::CorrectWitness,
            Some(_) => OutcomeKind::WrongWitness,
            // the checker itself failed; not the participant's fault
            None => OutcomeKind::Crash,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_literal, parse_program};
    use std::path::PathBuf;

    fn interp(lits: &[&str]) -> Interpretation {
        Interpretation::new(lits.iter().map(|s| parse_literal(s).unwrap())).unwrap()
    }

    fn record(violation: LimitViolation, exit: Option<i32>) -> RunRecord {
        RunRecord {
            system: "s".into(),
            problem: "p".into(),
            instance: 0,
            wall_time: 0.5,
            peak_memory: 0,
            exit_code: exit,
            signal: None,
            spawn_error: None,
            stdout_path: PathBuf::from("x.out"),
            limit_violation: violation,
        }
    }

    fn summary(kind: AnswerKind) -> AnswerSummary {
        AnswerSummary {
            kind,
            cost: None,
            optimum_claimed: false,
        }
    }

    fn verdict(valid: bool) -> CheckerVerdict {
        CheckerVerdict {
            valid,
            cost: None,
            raw_output: String::new(),
        }
    }

    #[test]
    fn checker_protocol() {
        let v = parse_checker_output("OK\n").unwrap();
        assert!(v.valid);
        assert_eq!(v.cost, None);
        let v = parse_checker_output("OK\nCOST 42\n").unwrap();
        assert_eq!(v.cost, Some(42));
        assert!(!parse_checker_output("FAIL\n").unwrap().valid);
        assert!(parse_checker_output("").is_err());
        assert!(parse_checker_output("MAYBE\n").is_err());
        assert!(parse_checker_output("OK\nCOST -1\n").is_err());
        assert!(parse_checker_output("OK\nCOST 1\nextra\n").is_err());
    }

    #[test]
    fn external_checker_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("checker.sh");
        std::fs::write(
            &script,
            "#!/bin/sh\nif grep -q good \"$2\"; then echo OK; echo COST 3; else echo FAIL; fi\n",
        )
        .unwrap();
        let inst = dir.path().join("inst");
        let good = dir.path().join("good");
        let bad = dir.path().join("bad");
        std::fs::write(&inst, "").unwrap();
        std::fs::write(&good, "good\n").unwrap();
        std::fs::write(&bad, "bad\n").unwrap();
        let cmd = vec!["sh".to_string(), script.display().to_string()];
        let v = run_external_checker(&cmd, None, &inst, &good).unwrap();
        assert!(v.valid);
        assert_eq!(v.cost, Some(3));
        assert!(!run_external_checker(&cmd, None, &inst, &bad).unwrap().valid);

        let crash = vec!["sh".to_string(), "-c".to_string(), "exit 3".to_string()];
        assert!(matches!(
            run_external_checker(&crash, None, &inst, &good),
            Err(CheckerError::Crash { .. })
        ));
        let missing = vec!["/nonexistent/checker".to_string()];
        assert!(matches!(
            run_external_checker(&missing, None, &inst, &good),
            Err(CheckerError::Spawn { .. })
        ));
    }

    #[test]
    fn stability_examples() {
        let p = parse_program("a|b.").unwrap();
        assert!(stability_check(&p, &interp(&["a"])).unwrap());
        assert!(!stability_check(&p, &interp(&["a", "b"])).unwrap());
        let p = parse_program("a.").unwrap();
        assert!(!stability_check(&p, &interp(&[])).unwrap());
    }

    #[test]
    fn classification() {
        let ok = record(LimitViolation::None, Some(0));
        assert_eq!(
            classify_outcome(&ok, &summary(AnswerKind::Unsat), None, Some(true)),
            OutcomeKind::WrongUnsat
        );
        assert_eq!(
            classify_outcome(&ok, &summary(AnswerKind::Unsat), None, Some(false)),
            OutcomeKind::CorrectUnsat
        );
        assert_eq!(
            classify_outcome(
                &ok,
                &summary(AnswerKind::Witness),
                Some(&verdict(false)),
                None
            ),
            OutcomeKind::WrongWitness
        );
        assert_eq!(
            classify_outcome(
                &ok,
                &summary(AnswerKind::Witness),
                Some(&verdict(true)),
                None
            ),
            OutcomeKind::CorrectWitness
        );
        let slow = record(LimitViolation::Time, None);
        let kind = classify_outcome(
            &slow,
            &summary(AnswerKind::Witness),
            Some(&verdict(false)),
            None,
        );
        assert_eq!(kind, OutcomeKind::Timeout);
        assert!(!kind.disqualifies());
        assert_eq!(
            classify_outcome(
                &record(LimitViolation::Memory, None),
                &summary(AnswerKind::Unsat),
                None,
                None
            ),
            OutcomeKind::MemOut
        );
        let garbage = summary(AnswerKind::Malformed {
            reason: "junk".into(),
        });
        assert_eq!(
            classify_outcome(&ok, &garbage, None, None),
            OutcomeKind::MalformedOutput
        );
        assert_eq!(
            classify_outcome(&record(LimitViolation::None, Some(1)), &garbage, None, None),
            OutcomeKind::Crash
        );
    }

    #[test]
    fn cost_counts_positive_literals_of_predicate() {
        let w = interp(&["in(1)", "in(2)", "out(3)", "-in(4)"]);
        assert_eq!(predicate_cost(&w, "in"), 2);
    }
}
