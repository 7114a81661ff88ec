//! Message types generated by `prost-build` from `crates/core/proto/jelly.proto`.
//!
//! This crate exists so tests can compare the hand-written codec in
//! `jelly-core` against an independent Protocol Buffers implementation.

#![allow(clippy::all)]

include!(concat!(env!("OUT_DIR"), "/jelly.rs"));
