//! The four benchmark experiments. Each returns [`BenchResult`] records.
//!
//! [`BenchResult`]: crate::results::BenchResult

mod e2e;
mod latency;
mod serdes;
mod size;

use std::fmt;
use std::str::FromStr;
use std::thread;
use std::time::{Duration, Instant};

use jelly_core::model::Statement;
use jelly_core::proto::PhysicalType;

pub use e2e::{bench_e2e, run_e2e_once, E2eConfig};
pub use latency::{bench_latency, run_latency, LatencyConfig};
pub use serdes::{bench_serdes, SerdesConfig};
pub use size::{bench_size, geometric_means};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transport {
    /// Length-delimited frames over a loopback TCP connection.
    Socket,
    /// The in-process broker topic.
    Topic,
}

impl fmt::Display for Transport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transport::Socket => "socket",
            Transport::Topic => "topic",
        })
    }
}

impl FromStr for Transport {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "socket" => Ok(Transport::Socket),
            "topic" => Ok(Transport::Topic),
            _ => Err(format!("unknown transport {s:?} (expected socket or topic)")),
        }
    }
}

/// Physical type of a statement sequence read by [`crate::files`], which
/// never mixes triples and quads.
pub fn physical_type_of(stmts: &[Statement]) -> PhysicalType {
    if stmts.first().is_some_and(Statement::is_quad) {
        PhysicalType::Quads
    } else {
        PhysicalType::Triples
    }
}

fn kilo_triples_per_sec(n: usize, elapsed: Duration) -> f64 {
    n as f64 / elapsed.as_secs_f64() / 1000.0
}

fn sleep_until(at: Instant) {
    let now = Instant::now();
    if at > now {
        thread::sleep(at - now);
    }
}
