use std::io::{self, Read, Write};

use super::TransportError;

/// Longest accepted length prefix.
pub const MAX_PREFIX_LEN: usize = 5;

/// Largest payload a frame may carry.
pub const MAX_FRAME_LEN: u64 = u32::MAX as u64;

/// Writes `payload` behind its unsigned varint length and flushes.
pub fn write_frame<W: Write + ?Sized>(sink: &mut W, payload: &[u8]) -> Result<(), TransportError> {
    let len = payload.len() as u64;
    if len > MAX_FRAME_LEN {
        return Err(TransportError::FrameTooLarge(len));
    }
    let mut prefix = [0u8; MAX_PREFIX_LEN];
    let mut n = 0;
    let mut v = len;
    loop {
        let byte = (v & 0x7F) as u8;
        v >>= 7;
        if v == 0 {
            prefix[n] = byte;
            n += 1;
            break;
        }
        prefix[n] = byte | 0x80;
        n += 1;
    }
    sink.write_all(&prefix[..n])?;
    sink.write_all(payload)?;
    sink.flush()?;
    Ok(())
}

/// Reads one frame. `Ok(None)` means the source ended cleanly at a frame
/// boundary.
///
/// Reads the prefix byte by byte, so wrap unbuffered sources in a
/// [`std::io::BufReader`].
pub fn read_frame<R: Read + ?Sized>(source: &mut R) -> Result<Option<Vec<u8>>, TransportError> {
    let mut len: u64 = 0;
    for i in 0..MAX_PREFIX_LEN {
        let Some(byte) = read_byte(source)? else {
            return if i == 0 { Ok(None) } else { Err(TransportError::Truncated) };
        };
        len |= u64::from(byte & 0x7F) << (7 * i);
        if byte & 0x80 == 0 {
            if len > MAX_FRAME_LEN {
                return Err(TransportError::FrameTooLarge(len));
            }
            let mut payload = Vec::new();
            source.take(len).read_to_end(&mut payload)?;
            if payload.len() as u64 != len {
                return Err(TransportError::Truncated);
            }
            return Ok(Some(payload));
        }
    }
    Err(TransportError::PrefixTooLong)
}

fn read_byte<R: Read + ?Sized>(source: &mut R) -> io::Result<Option<u8>> {
    let mut b = [0u8];
    loop {
        match source.read(&mut b) {
            Ok(0) => return Ok(None),
            Ok(_) => return Ok(Some(b[0])),
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn framed(payload: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        write_frame(&mut out, payload).unwrap();
        out
    }

    #[test]
    fn prefixes() {
        assert_eq!(framed(&[1, 2, 3]), vec![0x03, 1, 2, 3]);
        assert_eq!(&framed(&[7; 300])[..2], &[0xAC, 0x02]);
        assert_eq!(framed(&[]), vec![0x00]);
    }

    #[test]
    fn roundtrip_and_eos() {
        let mut bytes = framed(b"hello");
        bytes.extend(framed(b""));
        let mut src = &bytes[..];
        assert_eq!(read_frame(&mut src).unwrap(), Some(b"hello".to_vec()));
        assert_eq!(read_frame(&mut src).unwrap(), Some(Vec::new()));
        assert_eq!(read_frame(&mut src).unwrap(), None);
    }

    #[test]
    fn truncated_payload() {
        let mut src: &[u8] = &[0x05, 0xAA];
        assert!(matches!(read_frame(&mut src), Err(TransportError::Truncated)));
    }

    #[test]
    fn truncated_prefix() {
        let mut src: &[u8] = &[0x80];
        assert!(matches!(read_frame(&mut src), Err(TransportError::Truncated)));
    }

    #[test]
    fn prefix_too_long() {
        let mut src: &[u8] = &[0x80, 0x80, 0x80, 0x80, 0x80, 0x01];
        assert!(matches!(read_frame(&mut src), Err(TransportError::PrefixTooLong)));
    }

    #[test]
    fn prefix_over_u32() {
        // 2^32 in five bytes
        let mut src: &[u8] = &[0x80, 0x80, 0x80, 0x80, 0x10];
        assert!(matches!(read_frame(&mut src), Err(TransportError::FrameTooLarge(0x1_0000_0000))));
    }
}
