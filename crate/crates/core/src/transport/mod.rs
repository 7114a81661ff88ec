//! Moving encoded frames between producer and consumer: varint-delimited
//! framing over byte streams, optional per-frame gzip, an in-process topic
//! channel with broker semantics, and a network shaper for benchmarks.

mod compress;
mod framing;
mod rpc;
mod shaper;
mod topic;

use std::io;

use thiserror::Error;

use crate::proto::DecodeError;

pub use compress::CompressionMode;
pub use framing::{read_frame, write_frame, MAX_FRAME_LEN, MAX_PREFIX_LEN};
pub use rpc::{publish_stream, serve_publish_stream};
pub use shaper::{Bandwidth, LinkClock, NetProfile, ProfileParseError, ShapedProducer, ShapedWriter};
pub use topic::{TimedOut, TopicChannel, TopicClosed};

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("stream ended inside a frame")]
    Truncated,
    #[error("length prefix longer than 5 bytes")]
    PrefixTooLong,
    #[error("frame of {0} bytes exceeds the 2^32-1 limit")]
    FrameTooLarge(u64),
    #[error("malformed frame: {0}")]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Io(#[from] io::Error),
}
