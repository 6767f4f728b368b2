//! Criterion benchmarks for `preschwarz`; run with `cargo bench -p preschwarz-bench`.
