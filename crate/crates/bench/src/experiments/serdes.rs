use std::time::Instant;

use anyhow::{ensure, Result};
use jelly_core::codec::{Decoder, FrameEncoder, Variant};
use jelly_core::model::Statement;
use jelly_core::proto::{decode_frame, encode_frame_into};

use super::{kilo_triples_per_sec, physical_type_of};
use crate::results::{mean, BenchResult};

#[derive(Debug, Clone, Copy)]
pub struct SerdesConfig {
    pub variant: Variant,
    pub frame_rows: usize,
    pub warmups: usize,
    pub repetitions: usize,
}

impl Default for SerdesConfig {
    fn default() -> Self {
        SerdesConfig {
            variant: Variant::Full,
            frame_rows: 1000,
            warmups: 3,
            repetitions: 5,
        }
    }
}

/// Statements to encoded frame payloads.
fn serialize(stmts: &[Statement], cfg: &SerdesConfig) -> Result<Vec<Vec<u8>>> {
    let mut enc = FrameEncoder::for_variant(cfg.variant, physical_type_of(stmts), cfg.frame_rows)?;
    let mut out = Vec::with_capacity(stmts.len() / cfg.frame_rows + 1);
    for s in stmts {
        if let Some(frame) = enc.push(s)? {
            let mut buf = Vec::new();
            encode_frame_into(&frame, &mut buf);
            out.push(buf);
        }
    }
    if let Some(frame) = enc.finish() {
        let mut buf = Vec::new();
        encode_frame_into(&frame, &mut buf);
        out.push(buf);
    }
    Ok(out)
}

/// Payloads back to statements; `sink` sees each frame's statements.
fn deserialize(payloads: &[Vec<u8>], mut sink: impl FnMut(&[Statement])) -> Result<()> {
    let mut dec = Decoder::new();
    let mut stmts = Vec::new();
    for p in payloads {
        stmts.clear();
        dec.decode_rows(decode_frame(p)?.rows, &mut stmts)?;
        sink(&stmts);
    }
    Ok(())
}

/// Single-threaded encode-only and decode-only throughput over an in-memory
/// statement sequence.
pub fn bench_serdes(stmts: &[Statement], dataset: &str, cfg: &SerdesConfig) -> Result<Vec<BenchResult>> {
    ensure!(!stmts.is_empty(), "no statements to benchmark");
    let payloads = serialize(stmts, cfg)?;
    let mut decoded = Vec::with_capacity(stmts.len());
    deserialize(&payloads, |s| decoded.extend_from_slice(s))?;
    ensure!(decoded == stmts, "decoded statements differ from the input");
    drop(decoded);

    let config = crate::results::config_label(cfg.variant, false, None);
    let mut ser = Vec::new();
    let mut des = Vec::new();
    for round in 0..cfg.warmups + cfg.repetitions {
        let t = Instant::now();
        let payloads = std::hint::black_box(serialize(stmts, cfg)?);
        let ser_rate = kilo_triples_per_sec(stmts.len(), t.elapsed());

        let mut count = 0;
        let t = Instant::now();
        deserialize(&payloads, |s| count += std::hint::black_box(s).len())?;
        let des_rate = kilo_triples_per_sec(count, t.elapsed());

        if round >= cfg.warmups {
            ser.push(ser_rate);
            des.push(des_rate);
        }
    }

    let mut out = Vec::new();
    for (i, (s, d)) in ser.iter().zip(&des).enumerate() {
        let rep = i as u32 + 1;
        out.push(BenchResult::new("serdes", &config, dataset, "ser kT/s", rep, *s));
        out.push(BenchResult::new("serdes", &config, dataset, "des kT/s", rep, *d));
    }
    let (ms, md) = (mean(&ser), mean(&des));
    out.push(BenchResult::new("serdes", &config, dataset, "ser kT/s", 0, ms));
    out.push(BenchResult::new("serdes", &config, dataset, "des kT/s", 0, md));
    out.push(BenchResult::new("serdes", &config, dataset, "theoretical kT/s", 0, ms.min(md)));
    Ok(out)
}
