//! Criterion benchmarks for the `bieberbach` library; see `benches/`.
