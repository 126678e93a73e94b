//! Criterion benchmarks for the modforms2 crates; see `benches/`.
