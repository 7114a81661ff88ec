//! Benchmark records and their CSV file format.

use std::io::{Read, Write};

use anyhow::Result;
use jelly_core::codec::Variant;
use jelly_core::transport::NetProfile;
use serde::{Deserialize, Serialize};

/// One measurement. `repetition` 0 holds aggregates (means, percentiles,
/// single-shot sizes); measured runs count from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub experiment: String,
    pub config: String,
    pub dataset: String,
    pub metric: String,
    pub repetition: u32,
    pub value: f64,
}

impl BenchResult {
    pub fn new(experiment: &str, config: &str, dataset: &str, metric: &str, repetition: u32, value: f64) -> Self {
        BenchResult {
            experiment: experiment.into(),
            config: config.into(),
            dataset: dataset.into(),
            metric: metric.into(),
            repetition,
            value,
        }
    }
}

/// `jelly-full`, `jelly-full+gzip`, `jelly-full+gzip@15-50`, ...
pub fn config_label(variant: Variant, gzip: bool, profile: Option<NetProfile>) -> String {
    let mut s = format!("jelly-{variant}");
    if gzip {
        s.push_str("+gzip");
    }
    if let Some(p) = profile {
        s.push('@');
        s.push_str(&p.to_string());
    }
    s
}

/// Writes a header line and one line per record.
pub fn write_results<W: Write>(out: W, results: &[BenchResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        w.serialize(r)?;
    }
    if results.is_empty() {
        w.write_record(["experiment", "config", "dataset", "metric", "repetition", "value"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<BenchResult>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Look up the aggregate (repetition 0) value of `metric` for `config`.
pub fn aggregate(results: &[BenchResult], config: &str, metric: &str) -> Option<f64> {
    results
        .iter()
        .find(|r| r.config == config && r.metric == metric && r.repetition == 0)
        .map(|r| r.value)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Nearest-rank percentile, `p` in (0, 100].
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn geometric_mean(xs: &[f64]) -> f64 {
    (xs.iter().map(|x| x.ln()).sum::<f64>() / xs.len() as f64).exp()
}
