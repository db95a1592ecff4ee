//! Criterion benchmarks for `align-core`; see `benches/`.
