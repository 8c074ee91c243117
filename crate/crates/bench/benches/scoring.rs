use std::hint::black_box;

use aspcomp_core::scoring::{score_problem, InstanceResult, ProblemType, ScoringConfig};
use aspcomp_core::OutcomeKind;
use criterion::{criterion_group, criterion_main, Criterion};

fn scoring(c: &mut Criterion) {
    let cfg = ScoringConfig::default();
    let results: Vec<InstanceResult> = (0..10)
        .map(|i| InstanceResult {
            outcome: if i % 3 == 0 {
                OutcomeKind::Timeout
            } else {
                OutcomeKind::CorrectWitness
            },
            time: 12.5 * i as f64,
            cost: Some(100 + i),
            optimum_claimed: i % 2 == 0,
        })
        .collect();
    let best = vec![Some(100); 10];
    for ty in [ProblemType::Search, ProblemType::Optimization] {
        c.bench_function(&format!("score {ty} problem"), |b| {
            b.iter(|| score_problem(black_box(&results), black_box(&best), ty, &cfg))
        });
    }
}

criterion_group!(benches, scoring);
criterion_main!(benches);
