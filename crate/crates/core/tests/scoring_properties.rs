use aspcomp_core::scoring::{
    normalize_quality, s_opt_raw, s_solve, s_solve_raw, s_time, s_time_raw, score_problem,
    InstanceResult, ProblemType, ScoringConfig,
};
use aspcomp_core::verification::OutcomeKind;
use proptest::prelude::*;

const OUTCOMES: [OutcomeKind; 8] = [
    OutcomeKind::CorrectWitness,
    OutcomeKind::CorrectUnsat,
    OutcomeKind::WrongWitness,
    OutcomeKind::WrongUnsat,
    OutcomeKind::Timeout,
    OutcomeKind::MemOut,
    OutcomeKind::Crash,
    OutcomeKind::MalformedOutput,
];

fn result() -> impl Strategy<Value = InstanceResult> {
    (0..OUTCOMES.len(), 0.0..600.0f64, 1u64..200, any::<bool>()).prop_map(|(o, t, c, opt)| {
        InstanceResult {
            outcome: OUTCOMES[o],
            time: t,
            cost: Some(c),
            optimum_claimed: opt,
        }
    })
}

fn case() -> impl Strategy<Value = (ScoringConfig, Vec<InstanceResult>, Vec<Option<u64>>)> {
    (1usize..12, 0.0..=100.0f64).prop_flat_map(|(n, alpha)| {
        (
            Just(ScoringConfig {
                alpha,
                t_out: 600.0,
                n,
            }),
            prop::collection::vec(result(), n),
            prop::collection::vec(1u64..200, n),
        )
            .prop_map(|(cfg, mut rs, best)| {
                // best cost never exceeds a witness cost
                let best = rs
                    .iter_mut()
                    .zip(best)
                    .map(|(r, b)| {
                        let c = r.cost.unwrap();
                        Some(b.min(c))
                    })
                    .collect();
                (cfg, rs, best)
            })
    })
}

fn ptype() -> impl Strategy<Value = ProblemType> {
    prop_oneof![
        Just(ProblemType::Search),
        Just(ProblemType::Query),
        Just(ProblemType::Optimization)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn bounds((cfg, rs, best) in case(), ty in ptype()) {
        let eps = 1e-9;
        let solve = s_solve_raw(&rs, &cfg);
        let time = s_time_raw(&rs, &cfg);
        let opt = s_opt_raw(&rs, &best, &cfg);
        prop_assert!((-eps..=cfg.alpha + eps).contains(&solve));
        prop_assert!((-eps..=100.0 - cfg.alpha + eps).contains(&time));
        prop_assert!((-eps..=cfg.alpha + eps).contains(&opt));
        let b = score_problem(&rs, &best, ty, &cfg);
        prop_assert!(0 <= b.total && b.total <= 100);
        prop_assert!(0 <= b.s_solve && b.s_solve as f64 <= cfg.alpha.round());
        prop_assert!(0 <= b.s_time && b.s_time as f64 <= (100.0 - cfg.alpha).round());
        prop_assert_eq!(b.solved_score(), b.total - b.s_time);
        prop_assert_eq!(b.disqualified, rs.iter().any(|r| r.outcome.disqualifies()));
        if b.disqualified {
            prop_assert_eq!(b.total, 0);
        }
        // determinism
        prop_assert_eq!(score_problem(&rs, &best, ty, &cfg), b);
    }

    #[test]
    fn slower_never_scores_more((cfg, rs, _) in case(), i in any::<prop::sample::Index>(), dt in 0.0..600.0f64) {
        let i = i.index(rs.len());
        let mut slower = rs.clone();
        slower[i].time += dt;
        prop_assert!(s_time_raw(&slower, &cfg) <= s_time_raw(&rs, &cfg) + 1e-12);
        prop_assert!(s_time(&slower, &cfg) <= s_time(&rs, &cfg));
    }

    #[test]
    fn solving_more_never_scores_less((cfg, rs, _) in case(), i in any::<prop::sample::Index>()) {
        let i = i.index(rs.len());
        let mut more = rs.clone();
        more[i].outcome = OutcomeKind::CorrectWitness;
        if !rs[i].outcome.is_solved() {
            prop_assert!(s_solve(&more, &cfg) >= s_solve(&rs, &cfg));
        }
    }

    #[test]
    fn better_cost_never_scores_less((cfg, mut rs, best) in case(), i in any::<prop::sample::Index>()) {
        let i = i.index(rs.len());
        rs[i].outcome = OutcomeKind::CorrectWitness;
        let worse = s_opt_raw(&rs, &best, &cfg);
        let target = best[i].unwrap();
        let c = rs[i].cost.unwrap();
        rs[i].cost = Some(target + (c - target) / 2);
        prop_assert!(s_opt_raw(&rs, &best, &cfg) >= worse - 1e-12);
    }

    #[test]
    fn log_base_is_irrelevant(t in 0.0..600.0f64) {
        let nat = 1.0 - (t + 1.0).ln() / 601f64.ln();
        let dec = 1.0 - (t + 1.0).log10() / 601f64.log10();
        prop_assert!((nat - dec).abs() < 1e-12);
    }

    #[test]
    fn quality_is_at_least_m(best in 1u64..1000, extra in 0u64..1000) {
        prop_assert!(normalize_quality(best + extra, best) >= 100.0);
    }
}
