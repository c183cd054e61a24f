//! Criterion benchmarks for the census and counting code; see `benches/census.rs`.
