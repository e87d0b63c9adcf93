//! Benchmarks for the realizability engines; see `benches/engines.rs`.
