use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jelly_bench::corpus::{write_synthetic, Flavor};
use jelly_bench::experiments::{
    bench_e2e, bench_latency, bench_serdes, bench_size, geometric_means, E2eConfig, LatencyConfig, SerdesConfig,
    Transport,
};
use jelly_bench::files::{convert, read_statements, read_text};
use jelly_bench::results::{write_results, BenchResult};
use jelly_core::codec::Variant;
use jelly_core::transport::NetProfile;

#[derive(Parser)]
#[command(name = "jelly-bench", version, about = "Jelly RDF stream converter and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between .nt/.nq and .jelly (direction from the extensions).
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "full")]
        variant: Variant,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        frame_rows: u32,
        /// Gzip each frame.
        #[arg(long)]
        gzip: bool,
    },
    /// Encode/decode throughput, in memory.
    BenchSerdes {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long, default_value_t = 3)]
        warmups: usize,
    },
    /// Serialized size against N-Triples, with a geometric mean over inputs.
    BenchSize {
        /// Input .nt/.nq files.
        #[arg(long = "input", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Variants to measure (default: all).
        #[arg(long = "variant")]
        variants: Vec<Variant>,
        /// Also measure per-frame gzip.
        #[arg(long)]
        gzip: bool,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        frame_rows: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// End-to-end throughput through a shaped transport.
    BenchE2e {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "socket")]
        transport: Transport,
        /// `unlimited` or `<latency ms>-<Mbit/s>`, e.g. 15-50.
        #[arg(long, default_value = "unlimited")]
        profile: NetProfile,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        #[arg(long, default_value_t = 1)]
        warmups: usize,
    },
    /// Per-message latency through a shaped transport.
    BenchLatency {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "socket")]
        transport: Transport,
        #[arg(long, default_value = "unlimited")]
        profile: NetProfile,
        /// Statements per message.
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
        message_size: u32,
        /// Time between messages: 100us, 1ms, 10ms, ...
        #[arg(long, default_value = "10ms", value_parser = parse_interval)]
        interval: Duration,
        #[arg(long, default_value_t = 1000)]
        messages: usize,
        /// Extra messages sent first and not recorded.
        #[arg(long, default_value_t = 100)]
        warmup: usize,
    },
    /// Write a deterministic synthetic N-Triples corpus.
    GenSynthetic {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sensor")]
        flavor: Flavor,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "full")]
    variant: Variant,
    #[arg(long)]
    gzip: bool,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    frame_rows: u32,
    /// Results CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_interval(s: &str) -> Result<Duration, String> {
    let split = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let n: u64 = num.parse().map_err(|_| format!("bad interval {s:?}"))?;
    match unit {
        "us" => Ok(Duration::from_micros(n)),
        "ms" => Ok(Duration::from_millis(n)),
        "s" => Ok(Duration::from_secs(n)),
        _ => Err(format!("bad interval {s:?} (expected e.g. 100us, 1ms, 10ms)")),
    }
}

fn dataset_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned())
}

fn emit(out: Option<&Path>, results: &[BenchResult]) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_results(file, results)
        }
        None => {
            let stdout = io::stdout().lock();
            write_results(stdout, results)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Convert { input, output, variant, frame_rows, gzip } => {
            let stats = convert(&input, &output, variant, frame_rows as usize, gzip)?;
            eprintln!("{} statements, {} frames", stats.statements, stats.frames);
        }
        Command::BenchSerdes { common, repetitions, warmups } => {
            let stmts = read_statements(&common.input)?;
            let cfg = SerdesConfig {
                variant: common.variant,
                frame_rows: common.frame_rows as usize,
                warmups,
                repetitions,
            };
            if common.gzip {
                bail!("bench-serdes measures in-memory encoding; gzip is not applied");
            }
            emit(common.out.as_deref(), &bench_serdes(&stmts, &dataset_name(&common.input), &cfg)?)?;
        }
        Command::BenchSize { inputs, variants, gzip, frame_rows, out } => {
            let variants = if variants.is_empty() { Variant::ALL.to_vec() } else { variants };
            let gzips: &[bool] = if gzip { &[false, true] } else { &[false] };
            let mut results = Vec::new();
            for input in &inputs {
                let stmts = read_statements(input)?;
                results.extend(bench_size(&stmts, &dataset_name(input), &variants, gzips, frame_rows as usize)?);
            }
            let geo = geometric_means(&results);
            results.extend(geo);
            emit(out.as_deref(), &results)?;
        }
        Command::BenchE2e { common, transport, profile, repetitions, warmups } => {
            let text = read_text(&common.input)?;
            let reference = read_statements(&common.input)?;
            let cfg = E2eConfig {
                transport,
                variant: common.variant,
                gzip: common.gzip,
                profile,
                frame_rows: common.frame_rows as usize,
                warmups,
                repetitions,
            };
            emit(common.out.as_deref(), &bench_e2e(&text, &reference, &dataset_name(&common.input), &cfg)?)?;
        }
        Command::BenchLatency { common, transport, profile, message_size, interval, messages, warmup } => {
            let stmts = read_statements(&common.input)?;
            let cfg = LatencyConfig {
                transport,
                variant: common.variant,
                gzip: common.gzip,
                profile,
                message_size: message_size as usize,
                interval,
                messages,
                warmup,
            };
            emit(common.out.as_deref(), &bench_latency(&stmts, &dataset_name(&common.input), &cfg)?)?;
        }
        Command::GenSynthetic { out, triples, seed, flavor } => {
            write_synthetic(&out, flavor, triples, seed)?;
        }
    }
    io::stdout().flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
