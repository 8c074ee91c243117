//! The results directory and everything derived from it.
//!
//! ```text
//! <results>/suite.json                               manifest snapshot
//! <results>/runs/<system>/<problem>/<i>.run.json     RunRecord
//! <results>/runs/<system>/<problem>/<i>.eval.json    Evaluation
//! <results>/runs/<system>/<problem>/<i>.out|.err     solver output
//! <results>/runs/<system>/<problem>/<i>.witness      what the checker saw
//! ```
//!
//! Classification and scoring read nothing else, so they can be replayed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::manifest::SuiteManifest;
use super::output::{AnswerKind, AnswerSummary};
use super::runner::RunRecord;
use crate::scoring::{
    aggregate_track, score_problem, InstanceResult, ProblemType, ScoreBreakdown, Standing,
};
use crate::verification::{classify_outcome, CheckerVerdict, OutcomeKind};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("incomplete results: no {0}")]
    Missing(PathBuf),
}

/// Verification result persisted next to each run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub answer: AnswerSummary,
    pub verdict: Option<CheckerVerdict>,
    /// Set when the checker could not deliver a verdict.
    pub checker_error: Option<String>,
    /// Agreement of the builtin stability check with the external checker,
    /// when both ran.
    pub cross_check: Option<bool>,
}

pub fn suite_path(results: &Path) -> PathBuf {
    results.join("suite.json")
}

pub fn runs_root(results: &Path) -> PathBuf {
    results.join("runs")
}

pub fn run_dir(results: &Path, system: &str, problem: &str) -> PathBuf {
    runs_root(results).join(system).join(problem)
}

pub fn record_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("{index}.run.json"))
}

pub fn eval_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("{index}.eval.json"))
}

pub fn witness_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("{index}.witness"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), StoreError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // write-then-rename so a killed run never leaves half a record
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text + "\n")
        .and_then(|()| fs::rename(&tmp, path))
        .map_err(|source| StoreError::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, StoreError> {
    let text = fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            StoreError::Missing(path.to_path_buf())
        } else {
            StoreError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;
    serde_json::from_str(&text).map_err(|source| StoreError::Json {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedRun {
    pub record: RunRecord,
    pub evaluation: Evaluation,
    pub outcome: OutcomeKind,
    pub result: InstanceResult,
}

/// Persisted runs together with outcomes, scores and the ranking.
#[derive(Debug, Clone)]
pub struct ScoredStore {
    pub manifest: SuiteManifest,
    /// Keyed by `(system, problem)`, indexed by instance.
    pub runs: BTreeMap<(String, String), Vec<ClassifiedRun>>,
    /// Per problem, the best verified cost of each instance.
    pub best_costs: BTreeMap<String, Vec<Option<u64>>>,
    /// system → problem → score.
    pub scores: BTreeMap<String, BTreeMap<String, ScoreBreakdown>>,
    pub ranking: Vec<Standing>,
}

impl ScoredStore {
    pub fn outcome(&self, system: &str, problem: &str, instance: usize) -> Option<OutcomeKind> {
        self.runs
            .get(&(system.to_string(), problem.to_string()))
            .and_then(|v| v.get(instance))
            .map(|r| r.outcome)
    }

    pub fn score(&self, system: &str, problem: &str) -> Option<&ScoreBreakdown> {
        self.scores.get(system).and_then(|m| m.get(problem))
    }
}

/// Reads every record of the suite snapshot in `results` and scores it.
pub fn load_store(results: &Path) -> Result<ScoredStore, StoreError> {
    let manifest: SuiteManifest = read_json(&suite_path(results))?;
    let mut raw = BTreeMap::new();
    for system in &manifest.systems {
        for problem in &manifest.problems {
            let dir = run_dir(results, &system.name, &problem.name);
            let mut runs = Vec::new();
            for i in 0..problem.instances.len() {
                let record: RunRecord = read_json(&record_path(&dir, i))?;
                let eval: Evaluation = read_json(&eval_path(&dir, i))?;
                runs.push((record, eval));
            }
            raw.insert((system.name.clone(), problem.name.clone()), runs);
        }
    }
    Ok(classify_store(manifest, raw))
}

fn cost_of(eval: &Evaluation) -> Option<u64> {
    eval.verdict
        .as_ref()
        .and_then(|v| v.cost)
        .or(eval.answer.cost)
}

/// Classifies and scores persisted runs. Pure; independent of the order in
/// which systems were run.
pub fn classify_store(
    manifest: SuiteManifest,
    raw: BTreeMap<(String, String), Vec<(RunRecord, Evaluation)>>,
) -> ScoredStore {
    let first_pass = |record: &RunRecord, eval: &Evaluation| {
        classify_outcome(record, &eval.answer, eval.verdict.as_ref(), None)
    };

    let mut runs = BTreeMap::new();
    let mut best_costs = BTreeMap::new();
    let mut scores: BTreeMap<String, BTreeMap<String, ScoreBreakdown>> = BTreeMap::new();

    for problem in &manifest.problems {
        let cfg = manifest.config_for(problem);
        let n = problem.instances.len();
        let of_problem: Vec<(&String, &Vec<(RunRecord, Evaluation)>)> = raw
            .iter()
            .filter(|((_, p), _)| p == &problem.name)
            .map(|((s, _), v)| (s, v))
            .collect();

        // which systems produced a verified witness per instance
        let mut witnessed: Vec<Vec<&str>> = vec![Vec::new(); n];
        let mut best: Vec<Option<u64>> = vec![None; n];
        for (system, list) in &of_problem {
            for (i, (record, eval)) in list.iter().enumerate().take(n) {
                if first_pass(record, eval) == OutcomeKind::CorrectWitness
                    && eval.answer.kind == AnswerKind::Witness
                {
                    witnessed[i].push(system.as_str());
                    if let Some(c) = cost_of(eval) {
                        best[i] = Some(best[i].map_or(c, |b: u64| b.min(c)));
                    }
                }
            }
        }

        for (system, list) in of_problem {
            let classified: Vec<ClassifiedRun> = list
                .iter()
                .enumerate()
                .map(|(i, (record, eval))| {
                    let peer = witnessed
                        .get(i)
                        .map(|w| w.iter().any(|s| *s != system.as_str()));
                    let outcome =
                        classify_outcome(record, &eval.answer, eval.verdict.as_ref(), peer);
                    let solved = outcome.is_solved();
                    let result = InstanceResult {
                        outcome,
                        time: if solved { record.wall_time } else { cfg.t_out },
                        cost: if solved { cost_of(eval) } else { None },
                        optimum_claimed: eval.answer.optimum_claimed,
                    };
                    ClassifiedRun {
                        record: record.clone(),
                        evaluation: eval.clone(),
                        outcome,
                        result,
                    }
                })
                .collect();
            let results: Vec<InstanceResult> = classified.iter().map(|c| c.result).collect();
            let breakdown = score_problem(&results, &best, problem.problem_type, &cfg);
            scores
                .entry(system.clone())
                .or_default()
                .insert(problem.name.clone(), breakdown);
            runs.insert((system.clone(), problem.name.clone()), classified);
        }
        if problem.problem_type == ProblemType::Optimization {
            best_costs.insert(problem.name.clone(), best);
        }
    }

    let categories = manifest
        .problems
        .iter()
        .map(|p| (p.name.clone(), p.category))
        .collect();
    let ranking = aggregate_track(&scores, &categories);
    ScoredStore {
        manifest,
        runs,
        best_costs,
        scores,
        ranking,
    }
}
