//! Criterion benchmark crate; see `benches/core_ops.rs`.
