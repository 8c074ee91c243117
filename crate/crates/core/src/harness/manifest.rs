//! Suite manifests.
//!
//! ```text
//! # comment
//! [suite]
//! alpha   = 50
//! timeout = 5          # seconds
//! memory  = 256MiB     # bytes, or KiB / MiB / GiB
//! n       = 3          # optional; every problem must then have n instances
//! jobs    = 1
//!
//! [system clasp-like]
//! command = ./solver {encoding} {instance} {query}
//!
//! [problem coloring]
//! type      = search                # search | query | optimization
//! category  = NP                    # P | NP | BeyondNP | Optimization
//! encoding  = coloring/encoding.asp
//! checker   = ./check.sh            # optional
//! cost_predicate = in               # optional, builtin cost for optimization
//! query     = reach/query.txt       # query problems only
//! instance  = coloring/1.asp
//! instance  = coloring/2.asp
//! ```
//!
//! Relative paths are resolved against the manifest's directory, and solver
//! and checker commands run there. `${VAR}` in a command is replaced by the
//! environment variable `VAR`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scoring::{Category, ProblemType, ScoringConfig};

pub const DEFAULT_MEMORY: u64 = 3 << 30;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDef {
    pub name: String,
    /// Template with `{encoding}`, `{instance}` and `{query}` placeholders.
    pub command: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemDef {
    pub name: String,
    pub problem_type: ProblemType,
    pub category: Category,
    pub encoding: Option<PathBuf>,
    pub instances: Vec<PathBuf>,
    pub query: Option<PathBuf>,
    /// Whitespace-split checker command; the builtin stability check is used
    /// when absent.
    pub checker: Option<Vec<String>>,
    pub cost_predicate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteManifest {
    pub config: ScoringConfig,
    /// Memory cap in bytes.
    pub memory: u64,
    pub jobs: usize,
    pub systems: Vec<SystemDef>,
    pub problems: Vec<ProblemDef>,
    /// Working directory for solvers and checkers.
    pub base_dir: PathBuf,
}

impl SuiteManifest {
    pub fn problem(&self, name: &str) -> Option<&ProblemDef> {
        self.problems.iter().find(|p| p.name == name)
    }

    /// Scoring parameters for one problem (`N` is its instance count).
    pub fn config_for(&self, problem: &ProblemDef) -> ScoringConfig {
        self.config.with_n(problem.instances.len())
    }
}

pub fn parse_memory(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let split = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (digits, unit) = s.split_at(split);
    let n: u64 = digits
        .parse()
        .map_err(|_| format!("bad memory size `{s}`"))?;
    let mult = match unit.trim().to_ascii_lowercase().as_str() {
        "" | "b" => 1,
        "k" | "kib" => 1 << 10,
        "m" | "mib" => 1 << 20,
        "g" | "gib" => 1 << 30,
        _ => return Err(format!("unknown memory unit in `{s}`")),
    };
    n.checked_mul(mult)
        .ok_or_else(|| format!("memory size `{s}` overflows"))
}

fn expand_env(value: &str, line: usize) -> Result<String, ManifestError> {
    let mut out = String::new();
    let mut rest = value;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        let end = after.find('}').ok_or_else(|| ManifestError::Syntax {
            line,
            message: "unterminated `${`".into(),
        })?;
        let var = &after[..end];
        let val = std::env::var(var).map_err(|_| ManifestError::Syntax {
            line,
            message: format!("environment variable `{var}` is not set"),
        })?;
        out.push_str(&val);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[derive(Default)]
struct ProblemDraft {
    name: String,
    line: usize,
    problem_type: Option<ProblemType>,
    category: Option<Category>,
    encoding: Option<PathBuf>,
    instances: Vec<PathBuf>,
    query: Option<PathBuf>,
    checker: Option<Vec<String>>,
    cost_predicate: Option<String>,
}

enum Section {
    None,
    Suite,
    System(usize),
    Problem(usize),
}

/// Parses manifest text; relative paths are joined onto `base_dir`.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<SuiteManifest, ManifestError> {
    let mut config = ScoringConfig::default();
    let mut memory = DEFAULT_MEMORY;
    let mut jobs = 1;
    let mut n = None;
    let mut systems: Vec<(SystemDef, usize)> = Vec::new();
    let mut problems: Vec<ProblemDraft> = Vec::new();
    let mut section = Section::None;
    let resolve = |p: &str| base_dir.join(p);

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| ManifestError::Syntax { line, message };
        if let Some(header) = content.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| err("missing `]`".into()))?
                .trim();
            let (kind, name) = header
                .split_once(char::is_whitespace)
                .unwrap_or((header, ""));
            let name = name.trim().to_string();
            section = match (kind, name.is_empty()) {
                ("suite", true) => Section::Suite,
                ("system", false) => {
                    systems.push((
                        SystemDef {
                            name,
                            command: String::new(),
                        },
                        line,
                    ));
                    Section::System(systems.len() - 1)
                }
                ("problem", false) => {
                    problems.push(ProblemDraft {
                        name,
                        line,
                        ..Default::default()
                    });
                    Section::Problem(problems.len() - 1)
                }
                _ => return Err(err(format!("unknown section `[{header}]`"))),
            };
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match &section {
            Section::None => return Err(err("entry outside of any section".into())),
            Section::Suite => match key {
                "alpha" => {
                    config.alpha = value
                        .parse()
                        .map_err(|_| err(format!("bad alpha `{value}`")))?
                }
                "timeout" => {
                    config.t_out = value
                        .parse()
                        .map_err(|_| err(format!("bad timeout `{value}`")))?
                }
                "memory" => memory = parse_memory(value).map_err(err)?,
                "n" => {
                    n = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad n `{value}`")))?,
                    )
                }
                "jobs" => {
                    jobs = value
                        .parse()
                        .map_err(|_| err(format!("bad jobs `{value}`")))?
                }
                _ => return Err(err(format!("unknown suite key `{key}`"))),
            },
            Section::System(s) => match key {
                "command" => systems[*s].0.command = expand_env(value, line)?,
                _ => return Err(err(format!("unknown system key `{key}`"))),
            },
            Section::Problem(p) => {
                let d = &mut problems[*p];
                match key {
                    "type" => d.problem_type = Some(value.parse().map_err(err)?),
                    "category" => d.category = Some(value.parse().map_err(err)?),
                    "encoding" => d.encoding = Some(resolve(value)),
                    "instance" => d.instances.push(resolve(value)),
                    "query" => d.query = Some(resolve(value)),
                    "checker" => {
                        let cmd = expand_env(value, line)?;
                        d.checker = Some(cmd.split_whitespace().map(String::from).collect());
                    }
                    "cost_predicate" => d.cost_predicate = Some(value.to_string()),
                    _ => return Err(err(format!("unknown problem key `{key}`"))),
                }
            }
        }
    }

    config.validate().map_err(ManifestError::Invalid)?;
    if jobs == 0 {
        return Err(ManifestError::Invalid("jobs must be at least 1".into()));
    }
    let mut names = BTreeSet::new();
    for (s, line) in &systems {
        if s.command.trim().is_empty() {
            return Err(ManifestError::Syntax {
                line: *line,
                message: format!("system `{}` has no command", s.name),
            });
        }
        if !names.insert(s.name.clone()) {
            return Err(ManifestError::Invalid(format!(
                "duplicate system `{}`",
                s.name
            )));
        }
    }
    if systems.is_empty() {
        return Err(ManifestError::Invalid("no systems declared".into()));
    }

    let mut names = BTreeSet::new();
    let mut out = Vec::new();
    for d in problems {
        let invalid = |m: String| {
            ManifestError::Invalid(format!("problem `{}` (line {}): {m}", d.name, d.line))
        };
        if !names.insert(d.name.clone()) {
            return Err(invalid("duplicate problem name".into()));
        }
        let problem_type = d
            .problem_type
            .ok_or_else(|| invalid("missing `type`".into()))?;
        let category = d
            .category
            .ok_or_else(|| invalid("missing `category`".into()))?;
        if d.instances.is_empty() {
            return Err(invalid("no instances".into()));
        }
        if let Some(n) = n {
            if d.instances.len() != n {
                return Err(invalid(format!(
                    "{} instances, suite requires {n}",
                    d.instances.len()
                )));
            }
        }
        if problem_type == ProblemType::Query && d.query.is_none() {
            return Err(invalid("query problems need `query`".into()));
        }
        if d.checker.is_none() && d.encoding.is_none() {
            return Err(invalid(
                "needs a `checker` or an `encoding` for the builtin check".into(),
            ));
        }
        if d.checker.as_ref().is_some_and(Vec::is_empty) {
            return Err(invalid("empty checker command".into()));
        }
        for path in d.encoding.iter().chain(&d.instances).chain(&d.query) {
            if !path.is_file() {
                return Err(invalid(format!("file {} does not exist", path.display())));
            }
        }
        out.push(ProblemDef {
            name: d.name,
            problem_type,
            category,
            encoding: d.encoding,
            instances: d.instances,
            query: d.query,
            checker: d.checker,
            cost_predicate: d.cost_predicate,
        });
    }
    if out.is_empty() {
        return Err(ManifestError::Invalid("no problems declared".into()));
    }

    Ok(SuiteManifest {
        config,
        memory,
        jobs,
        systems: systems.into_iter().map(|(s, _)| s).collect(),
        problems: out,
        base_dir: base_dir.to_path_buf(),
    })
}

pub fn load_manifest(path: &Path) -> Result<SuiteManifest, ManifestError> {
    let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let dir = fs::canonicalize(if dir.as_os_str().is_empty() {
        Path::new(".")
    } else {
        dir
    })
    .map_err(|source| ManifestError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    parse_manifest(&text, &dir)
}
