//! Benchmarks for linfty-core live under `benches/`.
