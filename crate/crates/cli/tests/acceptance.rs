//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aspcomp_core::grounder::{ground_program, GroundProgram};
use aspcomp_core::harness::manifest::load_manifest;
use aspcomp_core::harness::report::{emit_report, PROBLEMS_FILE, RANKING_FILE};
use aspcomp_core::harness::{run_suite, ScoredStore, SuiteOptions};
use aspcomp_core::model::{ClassicalLiteral, Interpretation};
use aspcomp_core::parser::{parse_program, parse_query, scramble};
use aspcomp_core::random::{random_program_within, RandomConfig};
use aspcomp_core::scoring::{
    normalize_quality, quality_factor, s_opt_raw, s_solve_raw, s_time_raw, score_problem,
    InstanceResult, ProblemType, ScoringConfig,
};
use aspcomp_core::semantics::{
    answer_sets_ground, brute_force_answer_sets, cautious_entails, enumerate_answer_sets,
};
use aspcomp_core::verification::OutcomeKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Check + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn one_instance(t: f64) -> f64 {
    let cfg = ScoringConfig {
        alpha: 0.0,
        t_out: 600.0,
        n: 1,
    };
    s_time_raw(&[InstanceResult::new(OutcomeKind::CorrectWitness, t)], &cfg)
}

fn time_anchor() -> Check {
    let s = one_instance(23.5);
    ensure((49.0..=51.0).contains(&s), format!("s_time(23.5) = {s:.3}"))?;
    Ok(format!("s_time(23.5) = {s:.3}"))
}

fn time_endpoints() -> Check {
    let (zero, limit) = (one_instance(0.0), one_instance(600.0));
    ensure(zero == 100.0, format!("s_time(0) = {zero}"))?;
    ensure(limit == 0.0, format!("s_time(t_out) = {limit}"))?;
    Ok(format!("s_time(0) = {zero}, s_time(600) = {limit}"))
}

fn quality_anchors() -> Check {
    let one = 100.0 * quality_factor(normalize_quality(101, 100));
    let four = 100.0 * quality_factor(normalize_quality(104, 100));
    ensure((one - 35.0).abs() <= 3.0, format!("1% gap gives {one:.2}"))?;
    ensure(four < 2.0, format!("4% gap gives {four:.2}"))?;
    Ok(format!("1% gap {one:.2}, 4% gap {four:.2}"))
}

fn toy_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../toy")
}

fn run_toy(manifest: &str, results: &Path) -> Result<ScoredStore, String> {
    let m = load_manifest(&toy_dir().join(manifest)).map_err(|e| e.to_string())?;
    let opts = SuiteOptions {
        resume: false,
        cross_check: true,
    };
    run_suite(&m, results, opts).map_err(|e| e.to_string())
}

fn disqualification(store: &ScoredStore, report: &Path) -> Check {
    let bad = store
        .score("wrong", "coloring")
        .ok_or("no score for wrong/coloring")?;
    ensure(
        bad.disqualified && bad.total == 0,
        format!("wrong/coloring scored {bad:?}"),
    )?;
    let table = fs::read_to_string(report.join(PROBLEMS_FILE)).map_err(|e| e.to_string())?;
    let marked = table
        .split("\n\n")
        .find(|block| block.starts_with("coloring"))
        .is_some_and(|block| block.lines().skip(2).all(|l| l.trim_end().ends_with("0*")));
    ensure(marked, format!("no `*` for wrong on coloring:\n{table}"))?;
    for problem in ["reach", "strategic", "cover"] {
        let b = store.score("wrong", problem).ok_or("missing score")?;
        let ty = store.manifest.problem(problem).unwrap().problem_type;
        ensure(
            !b.disqualified
                && b.instance_quota(ty) == 50
                && b.total == b.instance_quota(ty) + b.s_time,
            format!("wrong/{problem} lost points: {b:?}"),
        )?;
    }
    Ok("wrong: coloring 0*, other problems keep full instance quota".into())
}

fn wrong_unsat(dir: &Path) -> Check {
    let store = run_toy("wrong-unsat.manifest", &dir.join("wrong-unsat"))?;
    let outcomes: Vec<_> = (0..3)
        .map(|i| store.outcome("liar", "coloring", i))
        .collect();
    let expected = [
        Some(OutcomeKind::WrongUnsat),
        Some(OutcomeKind::WrongUnsat),
        Some(OutcomeKind::CorrectUnsat),
    ];
    ensure(outcomes == expected, format!("liar outcomes {outcomes:?}"))?;
    let b = store.score("liar", "coloring").ok_or("no score")?;
    ensure(b.disqualified && b.total == 0, format!("liar scored {b:?}"))?;
    let f = store.score("fast", "coloring").ok_or("no score")?;
    ensure(
        !f.disqualified && f.s_solve == 50,
        format!("fast scored {f:?}"),
    )?;
    Ok("liar disqualified after the peer pass".into())
}

fn canonical(sets: &[Interpretation]) -> BTreeSet<Vec<String>> {
    sets.iter().map(Interpretation::canonical_strings).collect()
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = RandomConfig::default();
    let total = 600;
    let mut nonempty = 0;
    for k in 0..total {
        let (p, g) = random_program_within(&mut rng, &cfg, 20);
        let engine = answer_sets_ground(&g);
        let oracle = brute_force_answer_sets(&g).map_err(|e| e.to_string())?;
        if canonical(&engine) != canonical(&oracle) {
            return Err(format!("program {k} disagrees:\n{p}"));
        }
        nonempty += usize::from(!engine.is_empty());
    }
    Ok(format!(
        "{total}/{total} agree ({nonempty} with answer sets)"
    ))
}

fn sets(src: &str) -> Result<BTreeSet<Vec<String>>, String> {
    let p = parse_program(src).map_err(|e| e.to_string())?;
    Ok(canonical(
        &enumerate_answer_sets(&p, None)
            .map_err(|e| e.to_string())?
            .answer_sets,
    ))
}

fn family(list: &[&[&str]]) -> BTreeSet<Vec<String>> {
    list.iter()
        .map(|s| s.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// Least model of a ground positive program by naive iteration.
fn least_model(g: &GroundProgram) -> BTreeSet<ClassicalLiteral> {
    let mut m = BTreeSet::new();
    loop {
        let before = m.len();
        for r in &g.rules {
            if r.body.iter().all(|b| m.contains(&b.literal)) {
                m.extend(r.head.iter().cloned());
            }
        }
        if m.len() == before {
            return m;
        }
    }
}

fn textbook() -> Check {
    let cases: [(&str, &[&[&str]]); 4] = [
        ("a|b.", &[&["a"], &["b"]]),
        ("a:-not b. b:-not a.", &[&["a"], &["b"]]),
        ("a:-not a.", &[]),
        ("a|b. :-a.", &[&["b"]]),
    ];
    for (src, expected) in cases {
        let got = sets(src)?;
        ensure(got == family(expected), format!("`{src}` gave {got:?}"))?;
    }
    let horn = [
        "a. b :- a. c :- b, a. d :- e.",
        "edge(1,2). edge(2,3). edge(3,1). path(X,Y) :- edge(X,Y). path(X,Z) :- path(X,Y), edge(Y,Z).",
        "p(a). q(X) :- p(X). r(X,Y) :- q(X), p(Y). -s(X) :- r(X,X).",
    ];
    for src in horn {
        let p = parse_program(src).map_err(|e| e.to_string())?;
        let g = ground_program(&p).map_err(|e| e.to_string())?;
        let lm: Vec<String> = {
            let i = Interpretation::new(least_model(&g)).map_err(|e| e.to_string())?;
            i.canonical_strings()
        };
        let got = sets(src)?;
        ensure(
            got == BTreeSet::from([lm.clone()]),
            format!("`{src}` gave {got:?}, least model {lm:?}"),
        )?;
    }
    let p = parse_program("a|b. c:-a. c:-b.").map_err(|e| e.to_string())?;
    let ask = |q: &str| -> Result<bool, String> {
        cautious_entails(&p, &parse_query(q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    ensure(ask("c?")?, "c? should be true")?;
    ensure(!ask("a?")?, "a? should be false")?;
    Ok("4 fixtures, 3 Horn programs, cautious c?/a?".into())
}

fn random_results(rng: &mut ChaCha8Rng, n: usize) -> (Vec<InstanceResult>, Vec<Option<u64>>) {
    const KINDS: [OutcomeKind; 8] = [
        OutcomeKind::CorrectWitness,
        OutcomeKind::CorrectUnsat,
        OutcomeKind::WrongWitness,
        OutcomeKind::WrongUnsat,
        OutcomeKind::Timeout,
        OutcomeKind::MemOut,
        OutcomeKind::Crash,
        OutcomeKind::MalformedOutput,
    ];
    let mut best = Vec::new();
    let results = (0..n)
        .map(|_| {
            let cost = rng.gen_range(1..100u64);
            best.push(Some(rng.gen_range(1..=cost)));
            InstanceResult {
                outcome: KINDS[rng.gen_range(0..KINDS.len())],
                time: rng.gen_range(0.0..600.0),
                cost: Some(cost),
                optimum_claimed: rng.gen_bool(0.5),
            }
        })
        .collect();
    (results, best)
}

fn scoring_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let vectors = 10_000;
    let eps = 1e-9;
    for k in 0..vectors {
        let n = rng.gen_range(1..=12);
        let cfg = ScoringConfig {
            alpha: rng.gen_range(0.0..=100.0),
            t_out: 600.0,
            n,
        };
        let (rs, best) = random_results(&mut rng, n);
        let fail = |what: &str| Err(format!("vector {k}: {what}"));
        let (solve, time, opt) = (
            s_solve_raw(&rs, &cfg),
            s_time_raw(&rs, &cfg),
            s_opt_raw(&rs, &best, &cfg),
        );
        if !(-eps..=cfg.alpha + eps).contains(&solve)
            || !(-eps..=100.0 - cfg.alpha + eps).contains(&time)
            || !(-eps..=cfg.alpha + eps).contains(&opt)
        {
            return fail("raw quota out of bounds");
        }
        for ty in [
            ProblemType::Search,
            ProblemType::Query,
            ProblemType::Optimization,
        ] {
            let b = score_problem(&rs, &best, ty, &cfg);
            if !(0..=100).contains(&b.total) || b.total - b.s_time != b.solved_score() {
                return fail("total out of bounds");
            }
            if b != score_problem(&rs, &best, ty, &cfg) {
                return fail("not deterministic");
            }
        }
        let i = rng.gen_range(0..n);
        let mut slower = rs.clone();
        slower[i].time += rng.gen_range(0.0..600.0);
        if s_time_raw(&slower, &cfg) > time + eps {
            return fail("slower run scored more time points");
        }
        let mut more = rs.clone();
        more[i].outcome = OutcomeKind::CorrectWitness;
        if !rs[i].outcome.is_solved() && s_solve_raw(&more, &cfg) < solve - eps {
            return fail("solving more lowered s_solve");
        }
        let mut better = more.clone();
        let (c, b) = (better[i].cost.unwrap(), best[i].unwrap());
        better[i].cost = Some(b + (c - b) / 2);
        if s_opt_raw(&better, &best, &cfg) < s_opt_raw(&more, &best, &cfg) - eps {
            return fail("better cost lowered s_opt");
        }
        let t = rs[i].time;
        if ((1.0 - (t + 1.0).ln() / 601f64.ln()) - (1.0 - (t + 1.0).log10() / 601f64.log10())).abs()
            > 1e-12
        {
            return fail("log base changes the time quota");
        }
    }
    Ok(format!("{vectors} vectors"))
}

fn scramble_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let total = 100;
    for k in 0..total {
        let (p, _) = random_program_within(&mut rng, &RandomConfig::default(), 20);
        let (s, map) = scramble(&p, rng.gen());
        let orig = enumerate_answer_sets(&p, None)
            .map_err(|e| e.to_string())?
            .answer_sets;
        let scr = enumerate_answer_sets(&s, None)
            .map_err(|e| e.to_string())?
            .answer_sets;
        let back: Vec<Interpretation> = scr.iter().map(|a| map.backward(a)).collect();
        if canonical(&back) != canonical(&orig) || back.len() != orig.len() {
            return Err(format!(
                "program {k} does not map back:\n{p}\nscrambled:\n{s}"
            ));
        }
    }
    Ok(format!("{total}/{total} programs map back exactly"))
}

fn toy_competition(first: &ScoredStore, dir: &Path) -> Check {
    let order = |s: &ScoredStore| {
        s.ranking
            .iter()
            .map(|x| x.system.clone())
            .collect::<Vec<_>>()
    };
    let names = order(first);
    ensure(
        names == ["fast", "slow", "wrong"],
        format!("ranking {names:?}"),
    )?;
    for s in &first.ranking {
        let sum: i64 = s.per_category.values().sum();
        ensure(
            sum == s.grand_total,
            format!("{}: categories sum {sum} != {}", s.system, s.grand_total),
        )?;
    }
    let second = run_toy("suite.manifest", &dir.join("toy-again"))?;
    ensure(
        order(&second) == names,
        format!("second run ranked {:?}", order(&second)),
    )?;
    let totals: Vec<String> = first
        .ranking
        .iter()
        .map(|s| format!("{} {}", s.system, s.grand_total))
        .collect();
    Ok(totals.join(" > "))
}

fn main() -> ExitCode {
    std::env::set_var("ASPCOMP", env!("CARGO_BIN_EXE_aspcomp"));
    let dir = tempfile::tempdir().expect("temp dir");
    let results = dir.path().join("toy");
    let report = dir.path().join("report");
    let toy = run_toy("suite.manifest", &results).and_then(|s| {
        emit_report(&s, &report).map_err(|e| e.to_string())?;
        fs::read_to_string(report.join(RANKING_FILE)).map_err(|e| e.to_string())?;
        Ok(s)
    });

    let mut checks: Vec<Criterion> = vec![
        ("1 time-quota anchor", Box::new(time_anchor)),
        ("2 time-quota endpoints", Box::new(time_endpoints)),
        ("3 quality-curve anchors", Box::new(quality_anchors)),
    ];
    let toy_ref = &toy;
    let report_ref = &report;
    let dir_ref = dir.path();
    checks.push((
        "4 disqualification",
        Box::new(move || disqualification(toy_ref.as_ref().map_err(Clone::clone)?, report_ref)),
    ));
    checks.push((
        "5 wrong-unsat detection",
        Box::new(move || wrong_unsat(dir_ref)),
    ));
    checks.push(("6 oracle equivalence", Box::new(oracle_equivalence)));
    checks.push(("7 textbook fixtures", Box::new(textbook)));
    checks.push(("8 scoring properties", Box::new(scoring_properties)));
    checks.push(("9 scramble soundness", Box::new(scramble_soundness)));
    checks.push((
        "10 toy competition",
        Box::new(move || toy_competition(toy_ref.as_ref().map_err(Clone::clone)?, dir_ref)),
    ));

    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
