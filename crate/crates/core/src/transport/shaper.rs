//! NetEm-style link emulation: a serializing link of fixed rate followed by a
//! fixed one-way delay.
//!
//! Each message occupies the link for `bits / bandwidth` starting when both
//! it has been sent and the previous message has left; it becomes readable
//! one latency after its last bit left. There is no burst allowance, so the
//! delivered rate never exceeds the bandwidth over any window.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::mpsc::{sync_channel, Receiver, SyncSender};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::{TopicChannel, TopicClosed};

/// Writes are cut into pieces of this size so the far end sees a trickle
/// rather than one lump per write.
const CHUNK: usize = 16 * 1024;

/// In-flight chunks before the sender blocks.
const QUEUE_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bandwidth {
    Unlimited,
    BitsPerSecond(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NetProfile {
    pub latency: Duration,
    pub bandwidth: Bandwidth,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid network profile {0:?}: expected \"unlimited\" or LATENCY_MS-MBITS such as \"10-100\"")]
pub struct ProfileParseError(String);

impl NetProfile {
    pub const UNLIMITED: NetProfile = NetProfile {
        latency: Duration::ZERO,
        bandwidth: Bandwidth::Unlimited,
    };

    /// # Panics
    /// If `mbit_per_s` is zero.
    pub fn new(latency_ms: u64, mbit_per_s: u64) -> Self {
        assert!(mbit_per_s > 0, "bandwidth must be positive");
        NetProfile {
            latency: Duration::from_millis(latency_ms),
            bandwidth: Bandwidth::BitsPerSecond(mbit_per_s * 1_000_000),
        }
    }

    /// True when shaping would be a no-op.
    pub fn is_passthrough(&self) -> bool {
        self.latency.is_zero() && self.bandwidth == Bandwidth::Unlimited
    }

    /// Time `bytes` occupy the link, rounded up to whole nanoseconds.
    pub fn transmit_time(&self, bytes: usize) -> Duration {
        match self.bandwidth {
            Bandwidth::Unlimited => Duration::ZERO,
            Bandwidth::BitsPerSecond(bps) => {
                let nanos = (bytes as u128 * 8 * 1_000_000_000).div_ceil(bps as u128);
                Duration::from_nanos(nanos as u64)
            }
        }
    }
}

impl fmt::Display for NetProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bandwidth {
            Bandwidth::Unlimited if self.latency.is_zero() => f.write_str("unlimited"),
            Bandwidth::Unlimited => write!(f, "{}-unlimited", self.latency.as_millis()),
            Bandwidth::BitsPerSecond(bps) => {
                write!(f, "{}-{}", self.latency.as_millis(), bps as f64 / 1e6)
            }
        }
    }
}

impl FromStr for NetProfile {
    type Err = ProfileParseError;

    /// Accepts `unlimited`, or latency in milliseconds and bandwidth in
    /// Mbit/s separated by `-` or `/` (`10-100`, `15/50`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ProfileParseError(s.to_owned());
        if s.eq_ignore_ascii_case("unlimited") {
            return Ok(NetProfile::UNLIMITED);
        }
        let (lat, bw) = s.split_once(['-', '/']).ok_or_else(err)?;
        let latency_ms: u64 = lat.trim().parse().map_err(|_| err())?;
        let bw = bw.trim();
        let bandwidth = if bw.eq_ignore_ascii_case("unlimited") {
            Bandwidth::Unlimited
        } else {
            let mbit: f64 = bw.parse().map_err(|_| err())?;
            if !(mbit.is_finite() && mbit > 0.0) {
                return Err(err());
            }
            Bandwidth::BitsPerSecond((mbit * 1e6).round().max(1.0) as u64)
        };
        Ok(NetProfile {
            latency: Duration::from_millis(latency_ms),
            bandwidth,
        })
    }
}

/// The pure delivery schedule of a shaped link, on a caller-supplied clock.
#[derive(Debug, Clone)]
pub struct LinkClock {
    profile: NetProfile,
    link_free: Duration,
}

impl LinkClock {
    pub fn new(profile: NetProfile) -> Self {
        LinkClock {
            profile,
            link_free: Duration::ZERO,
        }
    }

    /// Schedules `bytes` sent at `now` and returns when they become readable.
    /// Times are offsets from any fixed epoch and `now` must not go backwards.
    pub fn schedule(&mut self, now: Duration, bytes: usize) -> Duration {
        let departure = now.max(self.link_free) + self.profile.transmit_time(bytes);
        self.link_free = departure;
        departure + self.profile.latency
    }
}

fn sleep_until(at: Instant) {
    let now = Instant::now();
    if at > now {
        thread::sleep(at - now);
    }
}

/// Shared front half of a shaped path: stamps items with delivery deadlines
/// and hands them to a worker thread that releases them on time.
#[derive(Debug)]
struct DelayLine<T> {
    clock: LinkClock,
    epoch: Instant,
    tx: SyncSender<(Instant, T)>,
}

impl<T: Send + 'static> DelayLine<T> {
    fn new(profile: NetProfile) -> (Self, Receiver<(Instant, T)>) {
        let (tx, rx) = sync_channel(QUEUE_DEPTH);
        let line = DelayLine {
            clock: LinkClock::new(profile),
            epoch: Instant::now(),
            tx,
        };
        (line, rx)
    }

    /// Returns false if the worker has gone away.
    fn send(&mut self, bytes: usize, item: T) -> bool {
        let at = self.clock.schedule(self.epoch.elapsed(), bytes);
        self.tx.send((self.epoch + at, item)).is_ok()
    }
}

enum WriterCmd {
    Data(Vec<u8>),
    Flush,
}

#[derive(Debug)]
enum WriterState<W> {
    Direct(W),
    Shaped {
        line: DelayLine<WriterCmd>,
        worker: JoinHandle<(W, io::Result<()>)>,
    },
    Finished,
}

impl fmt::Debug for WriterCmd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WriterCmd::Data(d) => write!(f, "Data({} bytes)", d.len()),
            WriterCmd::Flush => f.write_str("Flush"),
        }
    }
}

/// A byte sink whose bytes reach the underlying writer as if sent over a
/// shaped link. Delivery happens on a background thread, so writes return
/// once the bytes are queued.
#[derive(Debug)]
pub struct ShapedWriter<W: Write + Send + 'static> {
    state: WriterState<W>,
}

impl<W: Write + Send + 'static> ShapedWriter<W> {
    pub fn new(sink: W, profile: NetProfile) -> Self {
        if profile.is_passthrough() {
            return ShapedWriter {
                state: WriterState::Direct(sink),
            };
        }
        let (line, rx) = DelayLine::new(profile);
        let worker = thread::Builder::new()
            .name("net-shaper".into())
            .spawn(move || deliver_bytes(sink, rx))
            .expect("spawning shaper thread");
        ShapedWriter {
            state: WriterState::Shaped { line, worker },
        }
    }

    /// Waits until every queued byte has been delivered and flushed, then
    /// returns the underlying writer.
    pub fn finish(mut self) -> io::Result<W> {
        self.shutdown()
    }

    fn shutdown(&mut self) -> io::Result<W> {
        match std::mem::replace(&mut self.state, WriterState::Finished) {
            WriterState::Direct(mut w) => {
                w.flush()?;
                Ok(w)
            }
            WriterState::Shaped { line, worker } => {
                drop(line);
                let (w, result) = worker.join().map_err(|_| io::Error::other("shaper thread panicked"))?;
                result.map(|()| w)
            }
            WriterState::Finished => Err(io::Error::other("shaped writer already finished")),
        }
    }
}

fn deliver_bytes<W: Write>(mut sink: W, rx: Receiver<(Instant, WriterCmd)>) -> (W, io::Result<()>) {
    for (at, cmd) in rx.iter() {
        let r = match cmd {
            WriterCmd::Data(bytes) => {
                sleep_until(at);
                sink.write_all(&bytes)
            }
            WriterCmd::Flush => sink.flush(),
        };
        if let Err(e) = r {
            return (sink, Err(e));
        }
    }
    let r = sink.flush();
    (sink, r)
}

fn worker_gone() -> io::Error {
    io::Error::new(io::ErrorKind::BrokenPipe, "shaped link delivery failed")
}

impl<W: Write + Send + 'static> Write for ShapedWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match &mut self.state {
            WriterState::Direct(w) => w.write(buf),
            WriterState::Shaped { line, .. } => {
                for chunk in buf.chunks(CHUNK) {
                    if !line.send(chunk.len(), WriterCmd::Data(chunk.to_vec())) {
                        return Err(worker_gone());
                    }
                }
                Ok(buf.len())
            }
            WriterState::Finished => Err(worker_gone()),
        }
    }

    /// Asks for a flush once the bytes written so far have been delivered;
    /// does not wait for it.
    fn flush(&mut self) -> io::Result<()> {
        match &mut self.state {
            WriterState::Direct(w) => w.flush(),
            WriterState::Shaped { line, .. } => {
                // Zero-length marker: keeps its place in the queue without
                // occupying the link.
                if line.send(0, WriterCmd::Flush) {
                    Ok(())
                } else {
                    Err(worker_gone())
                }
            }
            WriterState::Finished => Err(worker_gone()),
        }
    }
}

impl<W: Write + Send + 'static> Drop for ShapedWriter<W> {
    fn drop(&mut self) {
        if !matches!(self.state, WriterState::Finished) {
            let _ = self.shutdown();
        }
    }
}

/// Producer endpoint of a [`TopicChannel`] behind a shaped link. Frames are
/// kept whole; each one lands in the topic once fully delivered.
#[derive(Debug)]
pub struct ShapedProducer {
    topic: Arc<TopicChannel>,
    line: Option<DelayLine<Vec<u8>>>,
    worker: Option<JoinHandle<()>>,
}

impl ShapedProducer {
    pub fn new(topic: Arc<TopicChannel>, profile: NetProfile) -> Self {
        if profile.is_passthrough() {
            return ShapedProducer {
                topic,
                line: None,
                worker: None,
            };
        }
        let (line, rx) = DelayLine::new(profile);
        let target = Arc::clone(&topic);
        let worker = thread::Builder::new()
            .name("net-shaper".into())
            .spawn(move || {
                for (at, frame) in rx.iter() {
                    sleep_until(at);
                    if target.produce(frame).is_err() {
                        break;
                    }
                }
            })
            .expect("spawning shaper thread");
        ShapedProducer {
            topic,
            line: Some(line),
            worker: Some(worker),
        }
    }

    pub fn produce(&mut self, frame: Vec<u8>) -> Result<(), TopicClosed> {
        match &mut self.line {
            None => self.topic.produce(frame),
            Some(line) => {
                if self.topic.is_closed() {
                    return Err(TopicClosed);
                }
                let len = frame.len();
                if line.send(len, frame) {
                    Ok(())
                } else {
                    Err(TopicClosed)
                }
            }
        }
    }

    /// Waits for in-flight frames to land, then closes the topic.
    pub fn close(mut self) {
        self.shutdown();
    }

    fn shutdown(&mut self) {
        self.line = None;
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
        self.topic.close();
    }
}

impl Drop for ShapedProducer {
    fn drop(&mut self) {
        self.shutdown();
    }
}
