//! Running a whole suite: every system on every instance, each run verified
//! and persisted before the next scoring step.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use log::{debug, info, warn};

use super::manifest::{ProblemDef, SuiteManifest, SystemDef};
use super::output::{parse_solver_output, AnswerKind, SolverAnswer};
use super::runner::{run_instance, LimitViolation, Limits, RunRecord};
use super::store::{
    eval_path, load_store, read_json, record_path, run_dir, runs_root, suite_path, witness_path,
    write_json, Evaluation, ScoredStore, StoreError,
};
use crate::model::{Interpretation, Program};
use crate::parser::{parse_program, parse_query};
use crate::scoring::ProblemType;
use crate::semantics;
use crate::verification::{predicate_cost, run_external_checker, stability_check, CheckerVerdict};

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    /// Keep completed runs of an earlier invocation.
    pub resume: bool,
    /// Also run the builtin stability check where an external checker is
    /// configured, and record whether they agree.
    pub cross_check: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0} holds results of a different suite; use a fresh directory or drop --resume")]
    SuiteMismatch(PathBuf),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SuiteError + '_ {
    move |source| SuiteError::Io {
        path: path.to_path_buf(),
        source,
    }
}

struct Task<'a> {
    system: &'a SystemDef,
    problem: &'a ProblemDef,
    index: usize,
}

/// Parsed programs and cautious answers shared by all workers.
#[derive(Default)]
struct Cache {
    programs: Mutex<HashMap<(String, usize), Result<Program, String>>>,
    cautious: Mutex<HashMap<(String, usize), Result<bool, String>>>,
}

impl Cache {
    fn program(&self, problem: &ProblemDef, index: usize) -> Result<Program, String> {
        let key = (problem.name.clone(), index);
        if let Some(p) = self.programs.lock().unwrap().get(&key) {
            return p.clone();
        }
        let load = |path: &Path| -> Result<Program, String> {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_program(&text).map_err(|e| format!("{}: {e}", path.display()))
        };
        let result = (|| {
            let instance = load(&problem.instances[index])?;
            match &problem.encoding {
                Some(enc) => Program::union([&load(enc)?, &instance]).map_err(|e| e.to_string()),
                None => Ok(instance),
            }
        })();
        self.programs.lock().unwrap().insert(key, result.clone());
        result
    }

    fn cautious(&self, problem: &ProblemDef, index: usize) -> Result<bool, String> {
        let key = (problem.name.clone(), index);
        if let Some(a) = self.cautious.lock().unwrap().get(&key) {
            return a.clone();
        }
        let result = (|| {
            let program = self.program(problem, index)?;
            let path = problem.query.as_ref().ok_or("no query file")?;
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let query = parse_query(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            semantics::cautious_entails(&program, &query).map_err(|e| e.to_string())
        })();
        self.cautious.lock().unwrap().insert(key, result.clone());
        result
    }
}

fn builtin_verdict(
    problem: &ProblemDef,
    index: usize,
    answer: &SolverAnswer,
    cache: &Cache,
) -> Result<CheckerVerdict, String> {
    let verdict = |valid: bool, cost: Option<u64>, note: &str| CheckerVerdict {
        valid,
        cost,
        raw_output: format!("builtin: {note}"),
    };
    match answer.summary.kind {
        AnswerKind::Query { answer } => {
            let expected = cache.cautious(problem, index)?;
            Ok(verdict(
                answer == expected,
                None,
                &format!("cautious answer is {expected}"),
            ))
        }
        AnswerKind::Witness => {
            if !Interpretation::is_consistent_set(&answer.witness) {
                return Ok(verdict(
                    false,
                    None,
                    "witness contains complementary literals",
                ));
            }
            let witness =
                Interpretation::new(answer.witness.iter().cloned()).map_err(|e| e.to_string())?;
            let program = cache.program(problem, index)?;
            let stable = stability_check(&program, &witness).map_err(|e| e.to_string())?;
            let cost = problem
                .cost_predicate
                .as_deref()
                .map(|p| predicate_cost(&witness, p));
            Ok(verdict(
                stable,
                cost,
                if stable {
                    "answer set"
                } else {
                    "not an answer set"
                },
            ))
        }
        _ => Err("nothing to verify".into()),
    }
}

fn evaluate(
    manifest: &SuiteManifest,
    task: &Task<'_>,
    record: &RunRecord,
    dir: &Path,
    opts: SuiteOptions,
    cache: &Cache,
) -> Evaluation {
    let stdout = fs::read(&record.stdout_path).unwrap_or_default();
    let answer = parse_solver_output(&String::from_utf8_lossy(&stdout), task.problem.problem_type);
    let mut eval = Evaluation {
        answer: answer.summary.clone(),
        verdict: None,
        checker_error: None,
        cross_check: None,
    };
    let verifiable = record.limit_violation == LimitViolation::None && record.spawn_error.is_none();
    let Some(contents) = answer.witness_file().filter(|_| verifiable) else {
        return eval;
    };
    let wpath = witness_path(dir, task.index);
    if let Err(e) = fs::write(&wpath, contents) {
        eval.checker_error = Some(format!("cannot write witness: {e}"));
        return eval;
    }
    let result = match &task.problem.checker {
        Some(cmd) => run_external_checker(
            cmd,
            Some(&manifest.base_dir),
            &task.problem.instances[task.index],
            &wpath,
        )
        .map_err(|e| e.to_string()),
        None => builtin_verdict(task.problem, task.index, &answer, cache),
    };
    match result {
        Ok(v) => {
            if opts.cross_check
                && task.problem.checker.is_some()
                && task.problem.encoding.is_some()
                && task.problem.problem_type != ProblemType::Query
            {
                match builtin_verdict(task.problem, task.index, &answer, cache) {
                    Ok(b) => {
                        eval.cross_check = Some(b.valid == v.valid);
                        if b.valid != v.valid {
                            warn!(
                                "{}/{}/{}: checker says {}, builtin stability check says {}",
                                task.system.name, task.problem.name, task.index, v.valid, b.valid
                            );
                        }
                    }
                    Err(e) => warn!(
                        "{}/{}: cross-check failed: {e}",
                        task.problem.name, task.index
                    ),
                }
            }
            eval.verdict = Some(v);
        }
        Err(e) => {
            warn!(
                "{}/{}/{}: verification failed, counting the run as a crash: {e}",
                task.system.name, task.problem.name, task.index
            );
            eval.checker_error = Some(e);
        }
    }
    eval
}

fn execute(
    manifest: &SuiteManifest,
    results: &Path,
    task: &Task<'_>,
    opts: SuiteOptions,
    cache: &Cache,
) -> Result<(), SuiteError> {
    let dir = run_dir(results, &task.system.name, &task.problem.name);
    let limits = Limits {
        time: manifest.config.t_out,
        memory: manifest.memory,
    };
    let record = run_instance(
        task.system,
        task.problem,
        task.index,
        limits,
        &dir,
        Some(&manifest.base_dir),
    );
    debug!(
        "{}/{}/{}: {:.3}s {:?}",
        task.system.name, task.problem.name, task.index, record.wall_time, record.limit_violation
    );
    let eval = evaluate(manifest, task, &record, &dir, opts, cache);
    // the evaluation is written first: a run counts as done once its record
    // exists
    write_json(&eval_path(&dir, task.index), &eval)?;
    write_json(&record_path(&dir, task.index), &record)?;
    Ok(())
}

/// Runs every (system, problem, instance) combination and returns the
/// scored results directory.
pub fn run_suite(
    manifest: &SuiteManifest,
    results: &Path,
    opts: SuiteOptions,
) -> Result<ScoredStore, SuiteError> {
    fs::create_dir_all(results).map_err(io_err(results))?;
    let snapshot = suite_path(results);
    if opts.resume && snapshot.exists() {
        let previous: SuiteManifest = read_json(&snapshot)?;
        if previous != *manifest {
            return Err(SuiteError::SuiteMismatch(results.to_path_buf()));
        }
    } else {
        let runs = runs_root(results);
        if runs.exists() {
            fs::remove_dir_all(&runs).map_err(io_err(&runs))?;
        }
    }
    write_json(&snapshot, manifest)?;

    let mut tasks = Vec::new();
    for problem in &manifest.problems {
        for index in 0..problem.instances.len() {
            for system in &manifest.systems {
                let dir = run_dir(results, &system.name, &problem.name);
                fs::create_dir_all(&dir).map_err(io_err(&dir))?;
                if opts.resume
                    && record_path(&dir, index).exists()
                    && eval_path(&dir, index).exists()
                {
                    continue;
                }
                tasks.push(Task {
                    system,
                    problem,
                    index,
                });
            }
        }
    }
    info!(
        "{} runs to do with {} worker(s), t_out {}s",
        tasks.len(),
        manifest.jobs,
        manifest.config.t_out
    );

    let next = AtomicUsize::new(0);
    let cache = Cache::default();
    let first_error: Mutex<Option<SuiteError>> = Mutex::new(None);
    thread::scope(|scope| {
        for _ in 0..manifest.jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(task) = tasks.get(i) else { break };
                if let Err(e) = execute(manifest, results, task, opts, &cache) {
                    first_error.lock().unwrap().get_or_insert(e);
                    break;
                }
            });
        }
    });
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    Ok(load_store(results)?)
}
