//! Benchmarks for the `normortho` kernels live in `benches/kernels.rs`.
