//! Launching one solver run under time and memory limits.
//!
//! The solver runs in its own process group. Every 100 ms the harness sums
//! the resident set size of all processes in that group and kills the group
//! once the total exceeds the cap; spikes shorter than the polling period go
//! unnoticed. The wall-clock limit is enforced the same way. Any descendant
//! still alive when the solver exits is killed too.

use std::fs::{self, File};
use std::os::unix::process::{CommandExt, ExitStatusExt};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitStatus, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::manifest::{ProblemDef, SystemDef};

/// Memory sampling period.
pub const POLL_PERIOD: Duration = Duration::from_millis(100);

/// Allowance between reaching the time limit and the process being gone.
pub const GRACE_SECONDS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Wall-clock seconds.
    pub time: f64,
    /// Bytes of resident memory across the process group.
    pub memory: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitViolation {
    #[default]
    None,
    Time,
    Memory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub system: String,
    pub problem: String,
    pub instance: usize,
    /// Wall-clock seconds from spawn to exit.
    pub wall_time: f64,
    /// Largest sampled resident memory, bytes.
    pub peak_memory: u64,
    pub exit_code: Option<i32>,
    pub signal: Option<i32>,
    pub spawn_error: Option<String>,
    pub stdout_path: PathBuf,
    pub limit_violation: LimitViolation,
}

impl RunRecord {
    pub fn exited_cleanly(&self) -> bool {
        self.exit_code == Some(0) && self.signal.is_none() && self.spawn_error.is_none()
    }
}

/// Substitutes `{encoding}`, `{instance}` and `{query}` in a command
/// template and splits it on whitespace. A token consisting solely of a
/// placeholder without a value is dropped.
pub fn expand_template(
    template: &str,
    encoding: Option<&Path>,
    instance: &Path,
    query: Option<&Path>,
) -> Vec<String> {
    let subs = [
        ("{encoding}", encoding),
        ("{instance}", Some(instance)),
        ("{query}", query),
    ];
    template
        .split_whitespace()
        .filter(|tok| !subs.iter().any(|(k, v)| v.is_none() && tok == k))
        .map(|tok| {
            let mut t = tok.to_string();
            for (k, v) in &subs {
                if let Some(p) = v {
                    t = t.replace(k, &p.display().to_string());
                }
            }
            t
        })
        .collect()
}

fn page_size() -> u64 {
    // SAFETY: sysconf has no preconditions.
    let n = unsafe { libc::sysconf(libc::_SC_PAGESIZE) };
    if n > 0 {
        n as u64
    } else {
        4096
    }
}

/// Sum of resident memory of every process whose process group is `pgid`.
pub fn group_memory(pgid: i32) -> u64 {
    let page = page_size();
    let Ok(entries) = fs::read_dir("/proc") else {
        return 0;
    };
    let mut total = 0;
    for entry in entries.flatten() {
        let name = entry.file_name();
        if !name.to_string_lossy().bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        let Ok(stat) = fs::read_to_string(entry.path().join("stat")) else {
            continue;
        };
        // fields after the parenthesised command name start at `state`
        let Some(rest) = stat.rfind(')').map(|i| &stat[i + 1..]) else {
            continue;
        };
        let fields: Vec<&str> = rest.split_whitespace().collect();
        let pgrp = fields.get(2).and_then(|s| s.parse::<i32>().ok());
        let rss = fields.get(21).and_then(|s| s.parse::<u64>().ok());
        if let (Some(pgrp), Some(rss)) = (pgrp, rss) {
            if pgrp == pgid {
                total += rss * page;
            }
        }
    }
    total
}

fn kill_group(pgid: i32) {
    // SAFETY: signalling a process group we created; failure (already gone)
    // is harmless.
    unsafe {
        libc::kill(-pgid, libc::SIGKILL);
    }
}

/// Runs `argv` with stdout and stderr redirected to the given files.
pub fn run_command(
    argv: &[String],
    cwd: Option<&Path>,
    stdout_path: &Path,
    stderr_path: &Path,
    limits: Limits,
) -> Execution {
    let spawn_failed = |msg: String| Execution {
        wall_time: 0.0,
        peak_memory: 0,
        status: None,
        spawn_error: Some(msg),
        limit_violation: LimitViolation::None,
    };
    let Some((program, args)) = argv.split_first() else {
        return spawn_failed("empty command".into());
    };
    let (stdout, stderr) = match (File::create(stdout_path), File::create(stderr_path)) {
        (Ok(o), Ok(e)) => (o, e),
        (Err(e), _) | (_, Err(e)) => {
            return spawn_failed(format!("cannot create output files: {e}"))
        }
    };
    let mut cmd = Command::new(program);
    cmd.args(args)
        .stdin(Stdio::null())
        .stdout(stdout)
        .stderr(stderr)
        .process_group(0);
    if let Some(dir) = cwd {
        cmd.current_dir(dir);
    }
    let start = Instant::now();
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => return spawn_failed(format!("failed to start `{program}`: {e}")),
    };
    let pgid = child.id() as i32;
    let mut peak = 0;
    let mut violation = LimitViolation::None;
    let mut next_sample = start;
    let status: ExitStatus = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {}
            Err(_) => {
                kill_group(pgid);
                break child.wait().expect("child was spawned");
            }
        }
        let now = Instant::now();
        if now >= next_sample {
            let mem = group_memory(pgid);
            peak = peak.max(mem);
            if mem > limits.memory {
                violation = LimitViolation::Memory;
                kill_group(pgid);
            }
            next_sample += POLL_PERIOD;
        }
        if violation == LimitViolation::None
            && now.duration_since(start).as_secs_f64() >= limits.time
        {
            violation = LimitViolation::Time;
            kill_group(pgid);
        }
        thread::sleep(Duration::from_millis(2));
    };
    let wall_time = start.elapsed().as_secs_f64();
    kill_group(pgid);
    if violation == LimitViolation::None && wall_time >= limits.time {
        violation = LimitViolation::Time;
    }
    Execution {
        wall_time,
        peak_memory: peak,
        status: Some(status),
        spawn_error: None,
        limit_violation: violation,
    }
}

/// Raw result of [`run_command`].
#[derive(Debug, Clone)]
pub struct Execution {
    pub wall_time: f64,
    pub peak_memory: u64,
    pub status: Option<ExitStatus>,
    pub spawn_error: Option<String>,
    pub limit_violation: LimitViolation,
}

/// Runs `system` on instance `index` of `problem`, writing `<index>.out` and
/// `<index>.err` into `out_dir`.
pub fn run_instance(
    system: &SystemDef,
    problem: &ProblemDef,
    index: usize,
    limits: Limits,
    out_dir: &Path,
    cwd: Option<&Path>,
) -> RunRecord {
    let argv = expand_template(
        &system.command,
        problem.encoding.as_deref(),
        &problem.instances[index],
        problem.query.as_deref(),
    );
    let stdout_path = out_dir.join(format!("{index}.out"));
    let stderr_path = out_dir.join(format!("{index}.err"));
    let exec = run_command(&argv, cwd, &stdout_path, &stderr_path, limits);
    RunRecord {
        system: system.name.clone(),
        problem: problem.name.clone(),
        instance: index,
        wall_time: exec.wall_time,
        peak_memory: exec.peak_memory,
        exit_code: exec.status.and_then(|s| s.code()),
        signal: exec.status.and_then(|s| s.signal()),
        spawn_error: exec.spawn_error,
        stdout_path,
        limit_violation: exec.limit_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(script: &str) -> Vec<String> {
        vec!["sh".into(), "-c".into(), script.into()]
    }

    const LIMITS: Limits = Limits {
        time: 2.0,
        memory: 256 << 20,
    };

    #[test]
    fn template_expansion() {
        let argv = expand_template(
            "solver --enc {encoding} {instance} {query}",
            Some(Path::new("/e.asp")),
            Path::new("/i.asp"),
            None,
        );
        assert_eq!(argv, vec!["solver", "--enc", "/e.asp", "/i.asp"]);
        let argv = expand_template("s --file={instance}", None, Path::new("/i"), None);
        assert_eq!(argv, vec!["s", "--file=/i"]);
    }

    #[test]
    fn happy_path() {
        let dir = tempfile::tempdir().unwrap();
        let (o, e) = (dir.path().join("o"), dir.path().join("e"));
        let x = run_command(&sh("echo ANSWER; echo p"), None, &o, &e, LIMITS);
        assert_eq!(x.limit_violation, LimitViolation::None);
        assert_eq!(x.status.unwrap().code(), Some(0));
        assert_eq!(fs::read_to_string(&o).unwrap(), "ANSWER\np\n");
    }

    #[test]
    fn timeout_kills_whole_group() {
        let dir = tempfile::tempdir().unwrap();
        let (o, e) = (dir.path().join("o"), dir.path().join("e"));
        let limits = Limits {
            time: 0.5,
            ..LIMITS
        };
        let x = run_command(&sh("sleep 30 & sleep 30"), None, &o, &e, limits);
        assert_eq!(x.limit_violation, LimitViolation::Time);
        assert!(
            x.wall_time >= 0.5 && x.wall_time < 0.5 + GRACE_SECONDS,
            "{}",
            x.wall_time
        );
    }

    #[test]
    fn memory_cap() {
        let dir = tempfile::tempdir().unwrap();
        let (o, e) = (dir.path().join("o"), dir.path().join("e"));
        let limits = Limits {
            time: 20.0,
            memory: 64 << 20,
        };
        let x = run_command(&["tail".into(), "/dev/zero".into()], None, &o, &e, limits);
        assert_eq!(x.limit_violation, LimitViolation::Memory);
        assert!(x.peak_memory > 64 << 20);
    }

    #[test]
    fn missing_binary() {
        let dir = tempfile::tempdir().unwrap();
        let (o, e) = (dir.path().join("o"), dir.path().join("e"));
        let x = run_command(&["/no/such/solver".into()], None, &o, &e, LIMITS);
        assert!(x.spawn_error.is_some());
    }
}
