//! Criterion benchmarks for the aspcomp toolchain live under `benches/`.
