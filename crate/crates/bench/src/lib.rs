//! Benchmark harness for Jelly streams: synthetic corpora, file conversion,
//! the serialization/size/throughput/latency experiments and their CSV
//! results.

pub mod corpus;
pub mod experiments;
pub mod files;
pub mod results;
