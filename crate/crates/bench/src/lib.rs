//! Criterion benches for the `tropdet` kernels live under `benches/`.
