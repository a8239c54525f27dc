//! Benchmark crate; see `benches/hotspots.rs`.
