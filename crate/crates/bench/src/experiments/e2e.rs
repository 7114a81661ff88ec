use std::io::{BufReader, BufWriter};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Context, Result};
use jelly_core::codec::{Decoder, FrameEncoder, Variant};
use jelly_core::model::Statement;
use jelly_core::ntriples::parse_document;
use jelly_core::proto::{decode_frame, encode_frame};
use jelly_core::transport::{read_frame, write_frame, CompressionMode, NetProfile, ShapedProducer, ShapedWriter, TopicChannel};

use super::{kilo_triples_per_sec, physical_type_of, Transport};
use crate::files::fit_statement;
use crate::results::{config_label, mean, BenchResult};

#[derive(Debug, Clone, Copy)]
pub struct E2eConfig {
    pub transport: Transport,
    pub variant: Variant,
    pub gzip: bool,
    pub profile: NetProfile,
    pub frame_rows: usize,
    pub warmups: usize,
    pub repetitions: usize,
}

impl E2eConfig {
    fn mode(&self) -> CompressionMode {
        if self.gzip {
            CompressionMode::GZIP
        } else {
            CompressionMode::None
        }
    }
}

/// Parses, encodes and sends `text` while a concurrent consumer receives and
/// decodes it. Returns the wall time from the producer's first parse to the
/// consumer's last decoded statement, after checking the consumer saw
/// exactly `reference`.
pub fn run_e2e_once(text: &str, reference: &[Statement], cfg: &E2eConfig) -> Result<Duration> {
    let mode = cfg.mode();
    let (elapsed, received) = match cfg.transport {
        Transport::Socket => {
            let listener = TcpListener::bind("127.0.0.1:0").context("binding loopback listener")?;
            let addr = listener.local_addr()?;
            thread::scope(|scope| -> Result<(Duration, Vec<Statement>)> {
                let consumer = scope.spawn(move || -> Result<Vec<Statement>> {
                    let (sock, _) = listener.accept()?;
                    let mut r = BufReader::with_capacity(1 << 16, sock);
                    consume(|| Ok(read_frame(&mut r)?), mode, reference.len())
                });
                let start = Instant::now();
                let produced = produce_socket(addr, text, reference, cfg);
                let received = consumer.join().map_err(|_| anyhow!("consumer panicked"))?;
                let elapsed = start.elapsed();
                produced.context("producer")?;
                Ok((elapsed, received.context("consumer")?))
            })?
        }
        Transport::Topic => {
            let topic = Arc::new(TopicChannel::new("jelly"));
            thread::scope(|scope| -> Result<(Duration, Vec<Statement>)> {
                let sub = Arc::clone(&topic);
                let consumer = scope.spawn(move || consume(|| Ok(sub.consume()), mode, reference.len()));
                let start = Instant::now();
                let mut producer = ShapedProducer::new(Arc::clone(&topic), cfg.profile);
                let produced = produce(text, reference, cfg, |payload| Ok(producer.produce(payload)?));
                producer.close();
                let received = consumer.join().map_err(|_| anyhow!("consumer panicked"))?;
                let elapsed = start.elapsed();
                produced.context("producer")?;
                Ok((elapsed, received.context("consumer")?))
            })?
        }
    };
    ensure!(received.len() == reference.len(), "received {} of {} statements", received.len(), reference.len());
    ensure!(received == reference, "received statements differ from those sent");
    Ok(elapsed)
}

fn produce_socket(addr: SocketAddr, text: &str, reference: &[Statement], cfg: &E2eConfig) -> Result<()> {
    let sock = TcpStream::connect(addr)?;
    sock.set_nodelay(true)?;
    let mut w = ShapedWriter::new(BufWriter::with_capacity(1 << 16, sock), cfg.profile);
    produce(text, reference, cfg, |payload| Ok(write_frame(&mut w, &payload)?))?;
    w.finish()?;
    Ok(())
}

fn produce(
    text: &str,
    reference: &[Statement],
    cfg: &E2eConfig,
    mut send: impl FnMut(Vec<u8>) -> Result<()>,
) -> Result<()> {
    let physical = physical_type_of(reference);
    let quads = physical == jelly_core::proto::PhysicalType::Quads;
    let mode = cfg.mode();
    let mut enc = FrameEncoder::for_variant(cfg.variant, physical, cfg.frame_rows)?;
    for s in parse_document(text.as_bytes(), false) {
        if let Some(frame) = enc.push(&fit_statement(s?, quads)?)? {
            send(mode.compress(&encode_frame(&frame)))?;
        }
    }
    if let Some(frame) = enc.finish() {
        send(mode.compress(&encode_frame(&frame)))?;
    }
    Ok(())
}

fn consume(
    mut recv: impl FnMut() -> Result<Option<Vec<u8>>>,
    mode: CompressionMode,
    expected: usize,
) -> Result<Vec<Statement>> {
    let mut dec = Decoder::new();
    let mut out = Vec::with_capacity(expected);
    while let Some(payload) = recv()? {
        let frame = decode_frame(&mode.decompress(&payload)?)?;
        dec.decode_rows(frame.rows, &mut out)?;
    }
    Ok(out)
}

/// End-to-end throughput in kT/s per measured repetition, plus their mean.
pub fn bench_e2e(text: &str, reference: &[Statement], dataset: &str, cfg: &E2eConfig) -> Result<Vec<BenchResult>> {
    let experiment = format!("e2e-{}", cfg.transport);
    let config = config_label(cfg.variant, cfg.gzip, Some(cfg.profile));
    let mut rates = Vec::new();
    for round in 0..cfg.warmups + cfg.repetitions {
        let elapsed = run_e2e_once(text, reference, cfg)?;
        if round >= cfg.warmups {
            rates.push(kilo_triples_per_sec(reference.len(), elapsed));
        }
    }
    let mut out: Vec<BenchResult> = rates
        .iter()
        .enumerate()
        .map(|(i, r)| BenchResult::new(&experiment, &config, dataset, "kT/s", i as u32 + 1, *r))
        .collect();
    out.push(BenchResult::new(&experiment, &config, dataset, "kT/s", 0, mean(&rates)));
    Ok(out)
}
