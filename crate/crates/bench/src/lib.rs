//! Criterion benchmarks for the bound pipeline live in `benches/`.
