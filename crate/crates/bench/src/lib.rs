//! Benchmarks for the representation engines live in `benches/`.
