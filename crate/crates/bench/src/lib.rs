//! Criterion benchmarks for `stablearn`; see `benches/`.
