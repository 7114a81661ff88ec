//! `RdfStreamService.PublishStream` over a plain TCP connection: the client
//! sends delimited frames, half-closes its side, and reads back one delimited
//! `RdfStreamAck`.

use std::io::{BufReader, BufWriter, Read, Write};
use std::net::{Shutdown, TcpStream};

use crate::proto::{decode_ack, decode_frame, encode_ack, StreamAck, StreamFrame};

use super::{read_frame, write_frame, TransportError};

/// Client side: streams already-encoded frames and waits for the ack.
pub fn publish_stream<I>(stream: TcpStream, frames: I) -> Result<StreamAck, TransportError>
where
    I: IntoIterator,
    I::Item: AsRef<[u8]>,
{
    let mut w = BufWriter::new(stream.try_clone()?);
    for f in frames {
        write_frame(&mut w, f.as_ref())?;
    }
    w.flush()?;
    drop(w);
    stream.shutdown(Shutdown::Write)?;
    let mut r = BufReader::new(stream);
    let ack = read_frame(&mut r)?.ok_or(TransportError::Truncated)?;
    Ok(decode_ack(&ack)?)
}

/// Server side: hands each received frame to `on_frame` until the client
/// half-closes, then acknowledges the total row count.
pub fn serve_publish_stream<S, F>(stream: S, mut on_frame: F) -> Result<StreamAck, TransportError>
where
    S: Read + Write,
    F: FnMut(StreamFrame),
{
    let mut r = BufReader::new(stream);
    let mut ack = StreamAck::default();
    while let Some(payload) = read_frame(&mut r)? {
        let frame = decode_frame(&payload)?;
        ack.received_rows += frame.rows.len() as u64;
        on_frame(frame);
    }
    write_frame(r.get_mut(), &encode_ack(&ack))?;
    Ok(ack)
}
