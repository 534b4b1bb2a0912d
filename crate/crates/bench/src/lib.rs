//! Criterion benchmarks for qshap-core; see benches/shapovalov.rs.
//! Run with `cargo bench -p qshap-bench`.
