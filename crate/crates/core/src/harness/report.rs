//! Report files: per-problem table, ranking, score CSV and cactus data.
//!
//! Output depends only on the scored store and is byte-for-byte
//! reproducible. Times are wall-clock seconds.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::store::ScoredStore;
use crate::scoring::{Category, ProblemType, ScoreBreakdown};

type Quota = fn(&ScoreBreakdown, ProblemType) -> i64;

pub const PROBLEMS_FILE: &str = "problems.txt";
pub const RANKING_FILE: &str = "ranking.txt";
pub const SCORES_FILE: &str = "scores.csv";
pub const CACTUS_FILE: &str = "cactus.csv";

fn cell(value: i64, disqualified: bool) -> String {
    if disqualified {
        format!("{value}*")
    } else {
        value.to_string()
    }
}

/// Score, instance quota and time quota of every system on every problem.
/// `*` marks a disqualification.
pub fn problems_table(store: &ScoredStore) -> String {
    let systems: Vec<&str> = store
        .manifest
        .systems
        .iter()
        .map(|s| s.name.as_str())
        .collect();
    let width = systems.iter().map(|s| s.len()).max().unwrap_or(0).max(6) + 2;
    let mut out = String::new();
    for problem in &store.manifest.problems {
        let _ = writeln!(
            out,
            "{} ({}, {}, N={})",
            problem.name,
            problem.category,
            problem.problem_type,
            problem.instances.len()
        );
        let _ = write!(out, "{:<16}", "");
        for s in &systems {
            let _ = write!(out, "{s:>width$}");
        }
        out.push('\n');
        let rows: [(&str, Quota); 3] = [
            ("Score", |b, _| b.total),
            ("Instance quota", |b, t| b.instance_quota(t)),
            ("Time quota", |b, _| b.s_time),
        ];
        for (label, get) in rows {
            let _ = write!(out, "{label:<16}");
            for s in &systems {
                let b = store.score(s, &problem.name).copied().unwrap_or_default();
                let _ = write!(
                    out,
                    "{:>width$}",
                    cell(get(&b, problem.problem_type), b.disqualified)
                );
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out.push_str("* disqualified on this problem\n");
    out
}

pub fn ranking_table(store: &ScoredStore) -> String {
    let width = store
        .ranking
        .iter()
        .map(|s| s.system.len())
        .max()
        .unwrap_or(0)
        .max(6);
    let mut out = String::new();
    let _ = write!(out, "{:<4}  {:<width$}", "rank", "system");
    for c in Category::ALL {
        let _ = write!(out, "  {:>12}", c.to_string());
    }
    let _ = writeln!(out, "  {:>8}", "total");
    for (i, s) in store.ranking.iter().enumerate() {
        let _ = write!(out, "{:<4}  {:<width$}", i + 1, s.system);
        for c in Category::ALL {
            let _ = write!(
                out,
                "  {:>12}",
                s.per_category.get(&c).copied().unwrap_or(0)
            );
        }
        let _ = writeln!(out, "  {:>8}", s.grand_total);
    }
    out
}

pub fn scores_csv(store: &ScoredStore) -> String {
    let mut out = String::from("system,problem,category,s_solve,s_time,s_opt,total,disqualified\n");
    for system in &store.manifest.systems {
        for problem in &store.manifest.problems {
            let b = store
                .score(&system.name, &problem.name)
                .copied()
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                system.name,
                problem.name,
                problem.category,
                b.s_solve,
                b.s_time,
                b.s_opt,
                b.total,
                b.disqualified
            );
        }
    }
    out
}

/// Solved-instance times per system, ascending.
pub fn cactus_csv(store: &ScoredStore) -> String {
    let mut out = String::from("system,instance_rank,time\n");
    for system in &store.manifest.systems {
        let mut times: Vec<f64> = store
            .runs
            .iter()
            .filter(|((s, _), _)| s == &system.name)
            .flat_map(|(_, runs)| runs.iter())
            .filter(|r| r.outcome.is_solved())
            .map(|r| r.record.wall_time)
            .collect();
        times.sort_by(f64::total_cmp);
        for (rank, t) in times.iter().enumerate() {
            let _ = writeln!(out, "{},{},{t:.3}", system.name, rank + 1);
        }
    }
    out
}

/// Writes the four report files into `dir` and returns their paths.
pub fn emit_report(store: &ScoredStore, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files = [
        (PROBLEMS_FILE, problems_table(store)),
        (RANKING_FILE, ranking_table(store)),
        (SCORES_FILE, scores_csv(store)),
        (CACTUS_FILE, cactus_csv(store)),
    ];
    let mut paths = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents)?;
        paths.push(path);
    }
    Ok(paths)
}
