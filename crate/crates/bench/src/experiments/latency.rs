use std::io::{BufReader, BufWriter};
use std::net::{TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Context, Result};
use jelly_core::codec::{Decoder, FrameEncoder, Variant};
use jelly_core::model::Statement;
use jelly_core::proto::{decode_frame, encode_frame};
use jelly_core::transport::{read_frame, write_frame, CompressionMode, NetProfile, ShapedProducer, ShapedWriter, TopicChannel};

use super::{physical_type_of, sleep_until, Transport};
use crate::results::{config_label, percentile, BenchResult};

#[derive(Debug, Clone, Copy)]
pub struct LatencyConfig {
    pub transport: Transport,
    pub variant: Variant,
    pub gzip: bool,
    pub profile: NetProfile,
    /// Statements per message (one frame each).
    pub message_size: usize,
    pub interval: Duration,
    /// Measured messages.
    pub messages: usize,
    /// Messages sent first and discarded, so connection setup and cold
    /// caches do not show up in the series.
    pub warmup: usize,
}

impl LatencyConfig {
    fn mode(&self) -> CompressionMode {
        if self.gzip {
            CompressionMode::GZIP
        } else {
            CompressionMode::None
        }
    }

    fn total(&self) -> usize {
        self.warmup + self.messages
    }
}

/// Statements of message `k`, cycling through the input.
fn message(stmts: &[Statement], size: usize, k: usize) -> impl Iterator<Item = &Statement> {
    (0..size).map(move |j| &stmts[(k * size + j) % stmts.len()])
}

/// Publishes messages at fixed absolute deadlines and measures, per message,
/// the time from entering the encoder to leaving the decoder. Returns the
/// `cfg.messages` measured latencies in send order.
pub fn run_latency(stmts: &[Statement], cfg: &LatencyConfig) -> Result<Vec<Duration>> {
    ensure!(!stmts.is_empty(), "no statements to send");
    ensure!(cfg.message_size > 0, "message size must be positive");
    let (entries, exits) = match cfg.transport {
        Transport::Socket => {
            let listener = TcpListener::bind("127.0.0.1:0").context("binding loopback listener")?;
            let addr = listener.local_addr()?;
            thread::scope(|scope| -> Result<_> {
                let consumer = scope.spawn(move || -> Result<Vec<Instant>> {
                    let (sock, _) = listener.accept()?;
                    sock.set_nodelay(true)?;
                    let mut r = BufReader::new(sock);
                    consume(stmts, cfg, || Ok(read_frame(&mut r)?))
                });
                let produced = (|| -> Result<Vec<Instant>> {
                    let sock = TcpStream::connect(addr)?;
                    sock.set_nodelay(true)?;
                    let mut w = ShapedWriter::new(BufWriter::new(sock), cfg.profile);
                    let entries = produce(stmts, cfg, |p| Ok(write_frame(&mut w, &p)?))?;
                    w.finish()?;
                    Ok(entries)
                })();
                let exits = consumer.join().map_err(|_| anyhow!("consumer panicked"))?;
                Ok((produced.context("producer")?, exits.context("consumer")?))
            })?
        }
        Transport::Topic => {
            let topic = Arc::new(TopicChannel::new("latency"));
            thread::scope(|scope| -> Result<_> {
                let sub = Arc::clone(&topic);
                let consumer = scope.spawn(move || consume(stmts, cfg, || Ok(sub.consume())));
                let mut producer = ShapedProducer::new(Arc::clone(&topic), cfg.profile);
                let produced = produce(stmts, cfg, |p| Ok(producer.produce(p)?));
                producer.close();
                let exits = consumer.join().map_err(|_| anyhow!("consumer panicked"))?;
                Ok((produced.context("producer")?, exits.context("consumer")?))
            })?
        }
    };
    ensure!(exits.len() == cfg.total(), "received {} of {} messages", exits.len(), cfg.total());
    Ok(entries
        .iter()
        .zip(&exits)
        .skip(cfg.warmup)
        .map(|(sent, done)| done.duration_since(*sent))
        .collect())
}

fn produce(stmts: &[Statement], cfg: &LatencyConfig, mut send: impl FnMut(Vec<u8>) -> Result<()>) -> Result<Vec<Instant>> {
    let mode = cfg.mode();
    let mut enc = FrameEncoder::for_variant(cfg.variant, physical_type_of(stmts), cfg.message_size)?;
    let mut entries = Vec::with_capacity(cfg.total());
    let start = Instant::now();
    for k in 0..cfg.total() {
        sleep_until(start + cfg.interval * k as u32);
        entries.push(Instant::now());
        let mut frame = None;
        for s in message(stmts, cfg.message_size, k) {
            frame = enc.push(s)?;
        }
        let frame = frame.expect("a full message completes a frame");
        send(mode.compress(&encode_frame(&frame)))?;
    }
    Ok(entries)
}

fn consume(
    stmts: &[Statement],
    cfg: &LatencyConfig,
    mut recv: impl FnMut() -> Result<Option<Vec<u8>>>,
) -> Result<Vec<Instant>> {
    let mode = cfg.mode();
    let mut dec = Decoder::new();
    let mut exits = Vec::with_capacity(cfg.total());
    let mut got = Vec::with_capacity(cfg.message_size);
    while let Some(payload) = recv()? {
        got.clear();
        dec.decode_rows(decode_frame(&mode.decompress(&payload)?)?.rows, &mut got)?;
        exits.push(Instant::now());
        let k = exits.len() - 1;
        ensure!(
            got.iter().eq(message(stmts, cfg.message_size, k)),
            "message {k} arrived corrupted"
        );
    }
    Ok(exits)
}

/// One `latency_us` record per measured message (repetition = message
/// number, from 1) plus p50/p90/p99 aggregates.
pub fn bench_latency(stmts: &[Statement], dataset: &str, cfg: &LatencyConfig) -> Result<Vec<BenchResult>> {
    let experiment = format!("latency-{}", cfg.transport);
    let config = format!(
        "{}/{}t/{}us",
        config_label(cfg.variant, cfg.gzip, Some(cfg.profile)),
        cfg.message_size,
        cfg.interval.as_micros()
    );
    let latencies: Vec<f64> = run_latency(stmts, cfg)?
        .iter()
        .map(|d| d.as_secs_f64() * 1e6)
        .collect();
    let mut out: Vec<BenchResult> = latencies
        .iter()
        .enumerate()
        .map(|(i, us)| BenchResult::new(&experiment, &config, dataset, "latency_us", i as u32 + 1, *us))
        .collect();
    let mut sorted = latencies;
    sorted.sort_by(f64::total_cmp);
    for p in [50.0, 90.0, 99.0] {
        let metric = format!("p{p}_latency_us");
        out.push(BenchResult::new(&experiment, &config, dataset, &metric, 0, percentile(&sorted, p)));
    }
    Ok(out)
}
