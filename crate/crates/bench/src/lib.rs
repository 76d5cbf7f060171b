//! Criterion benchmarks for `arcgrid`; see `benches/arcgrid.rs`.
