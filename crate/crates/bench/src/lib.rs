//! Benchmarks for `maxab`; see `benches/`.
