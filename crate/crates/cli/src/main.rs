use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use aspcomp_core::harness::manifest::{load_manifest, parse_memory};
use aspcomp_core::harness::output::{parse_solver_output, AnswerKind};
use aspcomp_core::harness::report::{emit_report, problems_table, ranking_table};
use aspcomp_core::harness::suite::SuiteError;
use aspcomp_core::harness::{load_store, run_suite, SuiteOptions};
use aspcomp_core::model::{Interpretation, Program};
use aspcomp_core::parser::{
    parse_ground_literals, parse_program, parse_query, print_program, scramble,
};
use aspcomp_core::scoring::ProblemType;
use aspcomp_core::semantics::{cautious_over, enumerate_answer_sets};
use aspcomp_core::verification::{predicate_cost, stability_check};
use aspcomp_core::Grounder;

/// ASP-Core toolchain and competition harness.
#[derive(Parser)]
#[command(name = "aspcomp", version)]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Inputs {
    /// Program files; their rules are combined.
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and print programs in normal form.
    Parse {
        #[command(flatten)]
        inputs: Inputs,
        /// Report diagnostics as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the ground instantiation.
    Ground {
        #[command(flatten)]
        inputs: Inputs,
        /// Refuse to produce more ground rules than this.
        #[arg(long, default_value_t = aspcomp_core::grounder::DEFAULT_RULE_CAP)]
        rule_cap: usize,
    },
    /// Compute answer sets and print them in the solver output format.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        /// Number of answer sets to print, 0 for all.
        #[arg(short = 'n', long, default_value_t = 1)]
        models: usize,
        /// Print an answer set with the fewest true atoms of this predicate.
        #[arg(long, value_name = "PREDICATE")]
        minimize: Option<String>,
    },
    /// Answer a cautious query; the last file holds `q?`.
    Query {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Check a witness against programs (checker protocol: prints OK or FAIL).
    Check {
        /// Report `COST n`, the number of true atoms of this predicate.
        #[arg(long, value_name = "PREDICATE")]
        cost_predicate: Option<String>,
        /// Program files followed by the witness file.
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Rename predicates and variables reproducibly.
    Scramble {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        seed: u64,
        /// Write the renaming as JSON here.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Run every system of a suite manifest on every instance.
    Run {
        manifest: PathBuf,
        #[arg(long, default_value = "results")]
        results_dir: PathBuf,
        /// Keep runs completed by an earlier invocation.
        #[arg(long)]
        resume: bool,
        /// Parallel runs.
        #[arg(long)]
        jobs: Option<usize>,
        /// Per-run wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Per-run memory cap, e.g. 3GiB.
        #[arg(long)]
        memory: Option<String>,
        /// Compare external checkers with the builtin stability check.
        #[arg(long)]
        cross_check: bool,
    },
    /// Print scores of a results directory.
    Score { results_dir: PathBuf },
    /// Write report files for a results directory.
    Report {
        results_dir: PathBuf,
        /// Output directory [default: <results-dir>/report].
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Bad input from the user, as opposed to a failure of the tool.
#[derive(Debug)]
struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl fmt::Display) -> anyhow::Error {
    anyhow!(InputError(msg.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_programs(files: &[PathBuf]) -> Result<Program> {
    let mut parts = Vec::new();
    for f in files {
        let text = read(f)?;
        let p = parse_program(&text).map_err(|d| input_err(format!("{}:\n{d}", f.display())))?;
        parts.push(p);
    }
    Program::union(&parts).map_err(input_err)
}

fn print_answer(i: &Interpretation) {
    println!("ANSWER");
    println!("{i}");
}

fn solve(files: &[PathBuf], models: usize, minimize: Option<&str>) -> Result<()> {
    let program = load_programs(files)?;
    let limit = if models == 0 || minimize.is_some() {
        None
    } else {
        Some(models)
    };
    let result = enumerate_answer_sets(&program, limit).map_err(input_err)?;
    if result.answer_sets.is_empty() {
        println!("INCONSISTENT");
        return Ok(());
    }
    match minimize {
        Some(pred) => {
            // sets are in canonical order, so ties go to the first
            let best = result
                .answer_sets
                .iter()
                .min_by_key(|a| predicate_cost(a, pred))
                .expect("non-empty");
            print_answer(best);
            println!("COST {}", predicate_cost(best, pred));
            println!("OPTIMUM");
        }
        None => result.answer_sets.iter().for_each(print_answer),
    }
    Ok(())
}

fn query(files: &[PathBuf]) -> Result<()> {
    let (qfile, programs) = files.split_last().expect("clap enforces two files");
    let q =
        parse_query(&read(qfile)?).map_err(|d| input_err(format!("{}: {d}", qfile.display())))?;
    let program = load_programs(programs)?;
    let sets = enumerate_answer_sets(&program, None)
        .map_err(input_err)?
        .answer_sets;
    println!("{}", cautious_over(&sets, &q));
    Ok(())
}

/// Witness in solver output format or as a bare literal line. `None` when
/// the file is not a witness at all.
fn read_witness(text: &str) -> Option<Vec<aspcomp_core::ClassicalLiteral>> {
    if text
        .lines()
        .any(|l| matches!(l.trim(), "ANSWER" | "INCONSISTENT"))
    {
        let answer = parse_solver_output(text, ProblemType::Search);
        return (answer.summary.kind == AnswerKind::Witness).then_some(answer.witness);
    }
    let line: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    match line.as_slice() {
        [] => Some(Vec::new()),
        [one] => parse_ground_literals(one).ok(),
        _ => None,
    }
}

fn check(files: &[PathBuf], cost_predicate: Option<&str>) -> Result<()> {
    let (wfile, programs) = files.split_last().expect("clap enforces two files");
    let program = load_programs(programs)?;
    let witness = read_witness(&read(wfile)?).and_then(|lits| Interpretation::new(lits).ok());
    let Some(witness) = witness else {
        println!("FAIL");
        return Ok(());
    };
    if stability_check(&program, &witness).map_err(input_err)? {
        println!("OK");
        if let Some(p) = cost_predicate {
            println!("COST {}", predicate_cost(&witness, p));
        }
    } else {
        println!("FAIL");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::Parse { inputs, json } => {
            let mut parts = Vec::new();
            for f in &inputs.files {
                match parse_program(&read(f)?) {
                    Ok(p) => parts.push(p),
                    Err(d) if json => {
                        println!("{}", serde_json::to_string_pretty(&d.0)?);
                        return Err(input_err(format!(
                            "{}: {} diagnostic(s)",
                            f.display(),
                            d.0.len()
                        )));
                    }
                    Err(d) => return Err(input_err(format!("{}:\n{d}", f.display()))),
                }
            }
            let program = Program::union(&parts).map_err(input_err)?;
            print!("{}", print_program(&program));
        }
        Cmd::Ground { inputs, rule_cap } => {
            let program = load_programs(&inputs.files)?;
            let g = Grounder::with_rule_cap(rule_cap)
                .ground(&program)
                .map_err(input_err)?;
            for r in &g.rules {
                println!("{r}");
            }
        }
        Cmd::Solve {
            inputs,
            models,
            minimize,
        } => solve(&inputs.files, models, minimize.as_deref())?,
        Cmd::Query { files } => query(&files)?,
        Cmd::Check {
            cost_predicate,
            files,
        } => check(&files, cost_predicate.as_deref())?,
        Cmd::Scramble { inputs, seed, map } => {
            let program = load_programs(&inputs.files)?;
            let (scrambled, renaming) = scramble(&program, seed);
            print!("{}", print_program(&scrambled));
            if let Some(path) = map {
                fs::write(&path, serde_json::to_string_pretty(&renaming)? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Cmd::Run {
            manifest,
            results_dir,
            resume,
            jobs,
            timeout,
            memory,
            cross_check,
        } => {
            let mut m = load_manifest(&manifest).map_err(input_err)?;
            if let Some(j) = jobs {
                m.jobs = j.max(1);
            }
            if let Some(t) = timeout {
                m.config.t_out = t;
                m.config.validate().map_err(input_err)?;
            }
            if let Some(mem) = memory {
                m.memory = parse_memory(&mem).map_err(input_err)?;
            }
            let opts = SuiteOptions {
                resume,
                cross_check,
            };
            let store = run_suite(&m, &results_dir, opts).map_err(|e| match e {
                SuiteError::SuiteMismatch(_) => input_err(e),
                e => anyhow!(e),
            })?;
            let report = results_dir.join("report");
            emit_report(&store, &report)
                .with_context(|| format!("writing {}", report.display()))?;
            print!("{}", ranking_table(&store));
            log::info!("report written to {}", report.display());
        }
        Cmd::Score { results_dir } => {
            let store = load_store(&results_dir).map_err(input_err)?;
            print!("{}\n{}", problems_table(&store), ranking_table(&store));
        }
        Cmd::Report { results_dir, out } => {
            let store = load_store(&results_dir).map_err(input_err)?;
            let out = out.unwrap_or_else(|| results_dir.join("report"));
            for p in
                emit_report(&store, &out).with_context(|| format!("writing {}", out.display()))?
            {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<InputError>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
