use std::io::{self, Read, Write};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

/// Per-frame payload compression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CompressionMode {
    #[default]
    None,
    /// gzip at the given level; values outside 1–9 are clamped.
    Gzip(u32),
}

impl CompressionMode {
    /// gzip at the usual default level 6.
    pub const GZIP: CompressionMode = CompressionMode::Gzip(6);

    pub fn is_gzip(self) -> bool {
        matches!(self, CompressionMode::Gzip(_))
    }

    pub fn compress(self, payload: &[u8]) -> Vec<u8> {
        match self {
            CompressionMode::None => payload.to_vec(),
            CompressionMode::Gzip(level) => {
                let mut enc = GzEncoder::new(
                    Vec::with_capacity(payload.len() / 4 + 32),
                    Compression::new(level.clamp(1, 9)),
                );
                enc.write_all(payload).expect("writing to a Vec cannot fail");
                enc.finish().expect("writing to a Vec cannot fail")
            }
        }
    }

    pub fn decompress(self, bytes: &[u8]) -> io::Result<Vec<u8>> {
        match self {
            CompressionMode::None => Ok(bytes.to_vec()),
            CompressionMode::Gzip(_) => {
                let mut out = Vec::with_capacity(bytes.len() * 4);
                GzDecoder::new(bytes).read_to_end(&mut out)?;
                Ok(out)
            }
        }
    }
}
