//! Criterion benchmarks for `limitop`; see `benches/`.
