//! Competition scoring.
//!
//! Search and query problems score `S_solve + S_time`; optimization problems
//! score `S_opt + S_time`. Any wrong answer on any instance zeroes the
//! problem. Quotas are rounded to the nearest integer independently (ties
//! away from zero).
//!
//! ```text
//! S_solve = α · N_S / N
//! S_time  = (100 − α) / N · Σ_i (1 − log(t_i + 1) / log(t_out + 1))
//! S_opt   = α · Σ_i S_opt^i
//! ```
//!
//! Unsolved instances enter `S_time` with `t_i = t_out`, i.e. contribute
//! nothing. Per instance, `S_opt^i` is either `1/N` for a recognized
//! unsatisfiable instance, or the sum of `1/4N` (correct witness), `1/4N`
//! (claimed optimum that matches the best known cost) and
//! `1/2N · e^(M − Q)` with `M = 100` and `Q = 100 · cost / best_cost`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::verification::OutcomeKind;

/// Best-quality anchor `M`.
pub const QUALITY_M: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemType {
    Search,
    Query,
    Optimization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    P,
    NP,
    BeyondNP,
    Optimization,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::P,
        Category::NP,
        Category::BeyondNP,
        Category::Optimization,
    ];
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemType::Search => "search",
            ProblemType::Query => "query",
            ProblemType::Optimization => "optimization",
        })
    }
}

impl FromStr for ProblemType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "search" => Ok(ProblemType::Search),
            "query" => Ok(ProblemType::Query),
            "optimization" | "optimisation" => Ok(ProblemType::Optimization),
            _ => Err(format!(
                "unknown problem type `{s}` (search, query, optimization)"
            )),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::P => "P",
            Category::NP => "NP",
            Category::BeyondNP => "BeyondNP",
            Category::Optimization => "Optimization",
        })
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "p" => Ok(Category::P),
            "np" => Ok(Category::NP),
            "beyondnp" => Ok(Category::BeyondNP),
            "optimization" | "opt" => Ok(Category::Optimization),
            _ => Err(format!(
                "unknown category `{s}` (P, NP, BeyondNP, Optimization)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    /// Percentage of the 100 points assigned to solving (or quality).
    pub alpha: f64,
    /// Time limit in seconds.
    pub t_out: f64,
    /// Instances per problem.
    pub n: usize,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            alpha: 50.0,
            t_out: 600.0,
            n: 10,
        }
    }
}

impl ScoringConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=100.0).contains(&self.alpha) {
            return Err(format!("alpha must lie in [0, 100], got {}", self.alpha));
        }
        if self.t_out.is_nan() || self.t_out <= 0.0 {
            return Err(format!("t_out must be positive, got {}", self.t_out));
        }
        if self.n == 0 {
            return Err("N must be at least 1".into());
        }
        Ok(())
    }

    pub fn with_n(self, n: usize) -> Self {
        ScoringConfig { n, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub outcome: OutcomeKind,
    /// Wall-clock seconds.
    pub time: f64,
    pub cost: Option<u64>,
    pub optimum_claimed: bool,
}

impl InstanceResult {
    pub fn new(outcome: OutcomeKind, time: f64) -> Self {
        InstanceResult {
            outcome,
            time,
            cost: None,
            optimum_claimed: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub s_solve: i64,
    pub s_time: i64,
    pub s_opt: i64,
    pub total: i64,
    pub disqualified: bool,
}

impl ScoreBreakdown {
    /// Instance quota: `S_solve`, or `S_opt` for optimization problems.
    pub fn instance_quota(&self, problem_type: ProblemType) -> i64 {
        match problem_type {
            ProblemType::Optimization => self.s_opt,
            _ => self.s_solve,
        }
    }

    /// Score with the time quota taken out.
    pub fn solved_score(&self) -> i64 {
        self.total - self.s_time
    }
}

fn round_points(x: f64) -> i64 {
    x.round() as i64
}

/// `1 − log(t + 1) / log(t_out + 1)` with `t` clamped to `[0, t_out]`.
pub fn time_fraction(t: f64, t_out: f64) -> f64 {
    let t = t.clamp(0.0, t_out);
    1.0 - (t + 1.0).ln() / (t_out + 1.0).ln()
}

pub fn s_solve_raw(results: &[InstanceResult], cfg: &ScoringConfig) -> f64 {
    let solved = results.iter().filter(|r| r.outcome.is_solved()).count();
    cfg.alpha * solved as f64 / cfg.n as f64
}

pub fn s_solve(results: &[InstanceResult], cfg: &ScoringConfig) -> i64 {
    round_points(s_solve_raw(results, cfg))
}

pub fn s_time_raw(results: &[InstanceResult], cfg: &ScoringConfig) -> f64 {
    let sum: f64 = results
        .iter()
        .filter(|r| r.outcome.is_solved())
        .map(|r| time_fraction(r.time, cfg.t_out))
        .sum();
    (100.0 - cfg.alpha) / cfg.n as f64 * sum
}

pub fn s_time(results: &[InstanceResult], cfg: &ScoringConfig) -> i64 {
    round_points(s_time_raw(results, cfg))
}

/// `Q = 100 · cost / best`. Infinite when `best = 0 < cost`.
pub fn normalize_quality(sys_cost: u64, best_cost: u64) -> f64 {
    if best_cost == 0 {
        if sys_cost == 0 {
            QUALITY_M
        } else {
            f64::INFINITY
        }
    } else {
        QUALITY_M * sys_cost as f64 / best_cost as f64
    }
}

/// `e^(M − Q)`, in `[0, 1]` for `Q ≥ M`.
pub fn quality_factor(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        (QUALITY_M - q).exp()
    }
}

/// Per-instance `S_opt^i` in units of the full per-instance reward (so the
/// maximum is 1, not `1/N`).
fn opt_reward_units(r: &InstanceResult, best_cost: Option<u64>) -> f64 {
    match r.outcome {
        OutcomeKind::CorrectUnsat => 1.0,
        OutcomeKind::CorrectWitness => {
            let mut units = 0.25;
            if let (Some(cost), Some(best)) = (r.cost, best_cost) {
                if r.optimum_claimed && cost == best {
                    units += 0.25;
                }
                units += 0.5 * quality_factor(normalize_quality(cost, best));
            }
            units
        }
        _ => 0.0,
    }
}

/// `best_costs[i]` is the lowest checker-verified cost any system reached on
/// instance `i`.
pub fn s_opt_raw(
    results: &[InstanceResult],
    best_costs: &[Option<u64>],
    cfg: &ScoringConfig,
) -> f64 {
    let sum: f64 = results
        .iter()
        .enumerate()
        .map(|(i, r)| opt_reward_units(r, best_costs.get(i).copied().flatten()))
        .sum();
    cfg.alpha * sum / cfg.n as f64
}

pub fn s_opt(results: &[InstanceResult], best_costs: &[Option<u64>], cfg: &ScoringConfig) -> i64 {
    round_points(s_opt_raw(results, best_costs, cfg))
}

pub fn score_problem(
    results: &[InstanceResult],
    best_costs: &[Option<u64>],
    problem_type: ProblemType,
    cfg: &ScoringConfig,
) -> ScoreBreakdown {
    if results.iter().any(|r| r.outcome.disqualifies()) {
        return ScoreBreakdown {
            disqualified: true,
            ..ScoreBreakdown::default()
        };
    }
    let s_time = s_time(results, cfg);
    match problem_type {
        ProblemType::Optimization => {
            let s_opt = s_opt(results, best_costs, cfg);
            ScoreBreakdown {
                s_solve: 0,
                s_time,
                s_opt,
                total: s_opt + s_time,
                disqualified: false,
            }
        }
        ProblemType::Search | ProblemType::Query => {
            let s_solve = s_solve(results, cfg);
            ScoreBreakdown {
                s_solve,
                s_time,
                s_opt: 0,
                total: s_solve + s_time,
                disqualified: false,
            }
        }
    }
}

/// One system's line in the track ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Standing {
    pub system: String,
    pub per_category: BTreeMap<Category, i64>,
    pub grand_total: i64,
    /// Sum of instance quotas, the first tie-breaker.
    pub solve_sum: i64,
}

/// Sums each system's problem scores per category and overall, then orders
/// by grand total (descending), instance-quota sum (descending), name.
///
/// Problems missing from `categories` are counted in the grand total only.
pub fn aggregate_track(
    per_system: &BTreeMap<String, BTreeMap<String, ScoreBreakdown>>,
    categories: &BTreeMap<String, Category>,
) -> Vec<Standing> {
    let mut standings: Vec<Standing> = per_system
        .iter()
        .map(|(system, problems)| {
            let mut per_category: BTreeMap<Category, i64> =
                Category::ALL.iter().map(|&c| (c, 0)).collect();
            let mut grand_total = 0;
            let mut solve_sum = 0;
            for (problem, b) in problems {
                grand_total += b.total;
                solve_sum += b.s_solve + b.s_opt;
                if let Some(&c) = categories.get(problem) {
                    *per_category.entry(c).or_default() += b.total;
                }
            }
            Standing {
                system: system.clone(),
                per_category,
                grand_total,
                solve_sum,
            }
        })
        .collect();
    standings.sort_by(|a, b| {
        b.grand_total
            .cmp(&a.grand_total)
            .then(b.solve_sum.cmp(&a.solve_sum))
            .then(a.system.cmp(&b.system))
    });
    standings
}

#[cfg(test)]
mod tests {
    use super::*;
    use OutcomeKind::*;

    fn cfg(alpha: f64, n: usize) -> ScoringConfig {
        ScoringConfig {
            alpha,
            t_out: 600.0,
            n,
        }
    }

    fn solved(k: usize, n: usize, t: f64) -> Vec<InstanceResult> {
        (0..n)
            .map(|i| {
                InstanceResult::new(
                    if i < k { CorrectWitness } else { Timeout },
                    if i < k { t } else { 600.0 },
                )
            })
            .collect()
    }

    #[test]
    fn solve_quota() {
        let c = cfg(50.0, 10);
        assert_eq!(s_solve(&solved(10, 10, 1.0), &c), 50);
        assert_eq!(s_solve(&solved(0, 10, 1.0), &c), 0);
        assert_eq!(s_solve(&solved(7, 10, 1.0), &c), 35);
    }

    #[test]
    fn time_quota() {
        let c = cfg(0.0, 1);
        assert_eq!(s_time(&[InstanceResult::new(CorrectWitness, 0.0)], &c), 100);
        assert_eq!(s_time(&[InstanceResult::new(CorrectWitness, 600.0)], &c), 0);
        let raw = s_time_raw(&[InstanceResult::new(CorrectWitness, 23.5)], &c);
        assert!((raw - 50.0).abs() <= 1.0, "{raw}");
    }

    #[test]
    fn log_base_does_not_matter() {
        for t in [0.0, 0.3, 7.0, 23.5, 140.0, 599.0] {
            let nat = time_fraction(t, 600.0);
            let dec = 1.0 - (t + 1.0f64).log10() / 601.0f64.log10();
            let bin = 1.0 - (t + 1.0f64).log2() / 601.0f64.log2();
            assert!((nat - dec).abs() < 1e-12 && (nat - bin).abs() < 1e-12);
        }
    }

    #[test]
    fn quality_normalization() {
        assert_eq!(normalize_quality(40, 40), 100.0);
        assert_eq!(normalize_quality(101, 100), 101.0);
        assert_eq!(quality_factor(normalize_quality(5, 0)), 0.0);
        assert_eq!(quality_factor(normalize_quality(0, 0)), 1.0);
    }

    #[test]
    fn opt_rewards() {
        let c = cfg(100.0, 1);
        let unsat = [InstanceResult::new(CorrectUnsat, 1.0)];
        assert_eq!(s_opt(&unsat, &[None], &c), 100);

        let mut w = InstanceResult::new(CorrectWitness, 1.0);
        w.cost = Some(40);
        assert_eq!(s_opt(&[w], &[Some(40)], &c), 75);
        w.optimum_claimed = true;
        assert_eq!(s_opt(&[w], &[Some(40)], &c), 100);
        // optimum claim with a worse cost than the best earns nothing extra
        w.cost = Some(41);
        let raw = s_opt_raw(&[w], &[Some(40)], &c);
        let expect = 100.0 * (0.25 + 0.5 * (-2.5f64).exp());
        assert!((raw - expect).abs() < 1e-9);
    }

    #[test]
    fn quality_curve_reading() {
        // 100-point quality-only view
        let one = 100.0 * quality_factor(normalize_quality(101, 100));
        let four = 100.0 * quality_factor(normalize_quality(104, 100));
        assert!((one - 36.79).abs() < 0.01, "{one}");
        assert!(four < 2.0, "{four}");
    }

    #[test]
    fn problem_scores() {
        let c = cfg(50.0, 10);
        let b = score_problem(&solved(10, 10, 0.0), &[], ProblemType::Search, &c);
        assert_eq!((b.s_solve, b.s_time, b.total), (50, 50, 100));

        let mut r = solved(10, 10, 0.0);
        r[3].outcome = WrongWitness;
        let b = score_problem(&r, &[], ProblemType::Search, &c);
        assert!(b.disqualified);
        assert_eq!(b.total, 0);

        let b = score_problem(&solved(10, 10, 600.0 - 1e-9), &[], ProblemType::Query, &c);
        assert_eq!((b.s_solve, b.s_time, b.total), (50, 0, 50));
        assert_eq!(b.solved_score(), 50);
    }

    #[test]
    fn track_aggregation() {
        let mut per_system = BTreeMap::new();
        let mut cats = BTreeMap::new();
        cats.insert("a".to_string(), Category::NP);
        cats.insert("b".to_string(), Category::P);
        let full = ScoreBreakdown {
            s_solve: 50,
            s_time: 50,
            s_opt: 0,
            total: 100,
            disqualified: false,
        };
        let half = ScoreBreakdown {
            s_solve: 50,
            s_time: 0,
            s_opt: 0,
            total: 50,
            disqualified: false,
        };
        let dq = ScoreBreakdown {
            disqualified: true,
            ..Default::default()
        };
        per_system.insert("one".to_string(), BTreeMap::from([("a".to_string(), full)]));
        per_system.insert(
            "two".to_string(),
            BTreeMap::from([("a".to_string(), half), ("b".to_string(), dq)]),
        );
        let ranking = aggregate_track(&per_system, &cats);
        assert_eq!(ranking[0].system, "one");
        assert_eq!(ranking[0].grand_total, 100);
        assert_eq!(ranking[1].grand_total, 50);
        for s in &ranking {
            assert_eq!(s.per_category.values().sum::<i64>(), s.grand_total);
        }
    }

    #[test]
    fn ties_break_on_solve_sum_then_name() {
        let mut per_system = BTreeMap::new();
        let a = ScoreBreakdown {
            s_solve: 40,
            s_time: 40,
            s_opt: 0,
            total: 80,
            disqualified: false,
        };
        let b = ScoreBreakdown {
            s_solve: 50,
            s_time: 30,
            s_opt: 0,
            total: 80,
            disqualified: false,
        };
        per_system.insert("alpha".to_string(), BTreeMap::from([("x".to_string(), a)]));
        per_system.insert("beta".to_string(), BTreeMap::from([("x".to_string(), b)]));
        per_system.insert("gamma".to_string(), BTreeMap::from([("x".to_string(), b)]));
        let r = aggregate_track(&per_system, &BTreeMap::new());
        let names: Vec<_> = r.iter().map(|s| s.system.as_str()).collect();
        assert_eq!(names, vec!["beta", "gamma", "alpha"]);
    }
}
