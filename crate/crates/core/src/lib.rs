//! Jelly: a compact binary format for streaming RDF triples and quads.
//!
//! - [`model`]: RDF terms and statements.
//! - [`ntriples`]: streaming N-Triples / N-Quads parser and writer.
//! - [`proto`]: wire rows and frames with their Protocol Buffers encoding.
//! - [`codec`]: the stateful encoder/decoder with lookup tables and repeat
//!   elision.
//! - [`transport`]: delimited framing, gzip, topic channel, network shaper.

pub mod codec;
pub mod model;
pub mod ntriples;
pub mod proto;
pub mod transport;
