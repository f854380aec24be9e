//! Benchmark-only crate; see `benches/qfi.rs`.
