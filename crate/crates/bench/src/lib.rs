//! Bench-only crate; the measurable code lives under `benches/`.
