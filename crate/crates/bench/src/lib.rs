//! Criterion benchmarks for `hyperfrac-core`; see `benches/`.
