use std::collections::BTreeMap;

use anyhow::Result;
use jelly_core::codec::{encode_statements, Variant};
use jelly_core::model::Statement;
use jelly_core::ntriples::write_statement_to;
use jelly_core::proto::encode_frame;
use jelly_core::transport::CompressionMode;

use super::physical_type_of;
use crate::results::{config_label, geometric_mean, BenchResult};

/// Bytes of a delimited frame holding `payload_len` bytes.
fn delimited_len(payload_len: usize) -> usize {
    let mut prefix = 1;
    let mut v = payload_len >> 7;
    while v > 0 {
        prefix += 1;
        v >>= 7;
    }
    prefix + payload_len
}

/// Serialized size of every (variant, gzip) combination against the
/// uncompressed N-Triples rendering. Frames hold `frame_rows` statements and
/// gzip applies per frame; N-Triples+gzip compresses the same chunks of
/// lines.
pub fn bench_size(
    stmts: &[Statement],
    dataset: &str,
    variants: &[Variant],
    gzip: &[bool],
    frame_rows: usize,
) -> Result<Vec<BenchResult>> {
    let mut nt_bytes = 0usize;
    let mut nt_gzip_bytes = 0usize;
    let mut chunk = String::new();
    for group in stmts.chunks(frame_rows) {
        chunk.clear();
        for s in group {
            write_statement_to(&mut chunk, s)?;
        }
        nt_bytes += chunk.len();
        if gzip.contains(&true) {
            nt_gzip_bytes += CompressionMode::GZIP.compress(chunk.as_bytes()).len();
        }
    }

    let mut out = Vec::new();
    let mut record = |config: &str, bytes: usize| {
        out.push(BenchResult::new("size", config, dataset, "bytes", 0, bytes as f64));
        out.push(BenchResult::new("size", config, dataset, "ratio", 0, bytes as f64 / nt_bytes as f64));
    };
    record("n-triples", nt_bytes);
    if gzip.contains(&true) {
        record("n-triples+gzip", nt_gzip_bytes);
    }
    let physical = physical_type_of(stmts);
    for &variant in variants {
        let frames = encode_statements(stmts, variant.options(physical), variant.use_repeat(), frame_rows)?;
        let payloads: Vec<Vec<u8>> = frames.iter().map(encode_frame).collect();
        for &gz in gzip {
            let bytes = if gz {
                payloads.iter().map(|p| delimited_len(CompressionMode::GZIP.compress(p).len())).sum()
            } else {
                payloads.iter().map(|p| delimited_len(p.len())).sum()
            };
            record(&config_label(variant, gz, None), bytes);
        }
    }
    Ok(out)
}

/// Per-config geometric mean of the ratios across datasets.
pub fn geometric_means(results: &[BenchResult]) -> Vec<BenchResult> {
    let mut by_config: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in results.iter().filter(|r| r.experiment == "size" && r.metric == "ratio") {
        by_config.entry(&r.config).or_default().push(r.value);
    }
    by_config
        .into_iter()
        .map(|(config, ratios)| BenchResult::new("size", config, "geomean", "ratio", 0, geometric_mean(&ratios)))
        .collect()
}
