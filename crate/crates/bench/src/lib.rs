//! Benchmarks for the invariant computations live in `benches/`.
