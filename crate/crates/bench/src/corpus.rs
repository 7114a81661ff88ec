//! Deterministic synthetic RDF.
//!
//! - `sensor`: timestamped measurement streams, six triples per observation,
//!   few predicates, many numeric literals, heavy prefix and subject reuse.
//! - `social`: high-entropy user/post IRIs, language-tagged text.
//! - `mixed`: an interleaving of the two plus blank nodes and integers.
//!
//! [`random_stream`] produces arbitrary statement sequences (quads, quoted
//! triples, generalized terms) for codec tests.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};
use jelly_core::model::{GraphName, Literal, LiteralKind, Statement, Term, Triple};
use jelly_core::ntriples::write_statement_to;
use jelly_core::proto::{PhysicalType, StreamOptions};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
const SOSA: &str = "http://www.w3.org/ns/sosa/";
const SENSORS: &str = "http://sensors.example.org/";
const SOCIAL: &str = "http://social.example.net/";
const FOAF: &str = "http://xmlns.com/foaf/0.1/";
const SIOC: &str = "http://rdfs.org/sioc/ns#";

/// Stations in the sensor corpus; deliberately more than 256 so a small
/// name table thrashes, and far fewer than the default 4000.
const STATIONS: u32 = 400;
const SENSORS_PER_STATION: u32 = 2;
const PROPERTIES: &[(&str, &str)] = &[
    ("airTemperature", "DEG_C"),
    ("relativeHumidity", "PERCENT"),
    ("windSpeed", "M-PER-SEC"),
    ("airPressure", "HectoPA"),
    ("rainfall", "MilliM"),
    ("pm25", "MicroGM-PER-M3"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Sensor,
    Social,
    Mixed,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Sensor => "sensor",
            Flavor::Social => "social",
            Flavor::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sensor" => Ok(Flavor::Sensor),
            "social" => Ok(Flavor::Social),
            "mixed" => Ok(Flavor::Mixed),
            _ => Err(format!("unknown flavor {s:?} (expected sensor, social or mixed)")),
        }
    }
}

fn iri(s: impl Into<String>) -> Term {
    Term::Iri(s.into())
}

fn typed(lexical: String, datatype: &str) -> Term {
    Term::Literal(Literal {
        lexical,
        kind: LiteralKind::Typed(format!("{XSD}{datatype}")),
    })
}

fn lang(lexical: String, tag: &str) -> Term {
    Term::Literal(Literal {
        lexical,
        kind: LiteralKind::LangTagged(tag.into()),
    })
}

fn t(s: &Term, p: impl Into<String>, o: Term) -> Statement {
    Statement::triple(s.clone(), iri(p), o)
}

/// ISO-8601 UTC timestamp `secs` after 2024-01-01T00:00:00Z.
fn timestamp(secs: u64) -> String {
    let days = secs / 86_400;
    let rem = secs % 86_400;
    let (y, m, d) = civil_from_days(days as i64 + 19_723); // 2024-01-01
    format!("{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z", rem / 3600, rem / 60 % 60, rem % 60)
}

/// Days since 1970-01-01 to (year, month, day).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let y = yoe + era * 400 + i64::from(m <= 2);
    (y, m, d)
}

/// Infinite deterministic statement source for one flavor.
pub struct Generator {
    flavor: Flavor,
    rng: ChaCha8Rng,
    seq: u64,
    clock: u64,
    buffer: std::vec::IntoIter<Statement>,
    users: Vec<String>,
}

impl Generator {
    pub fn new(flavor: Flavor, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let users = (0..5000).map(|_| format!("{:016x}", rng.random::<u64>())).collect();
        Generator {
            flavor,
            rng,
            seq: 0,
            clock: 0,
            buffer: Vec::new().into_iter(),
            users,
        }
    }

    fn refill(&mut self) -> Vec<Statement> {
        self.seq += 1;
        match self.flavor {
            Flavor::Sensor => self.observation(),
            Flavor::Social => self.social_event(),
            Flavor::Mixed => match self.rng.random_range(0..10) {
                0..=4 => self.observation(),
                5..=7 => self.social_event(),
                _ => self.described_thing(),
            },
        }
    }

    fn observation(&mut self) -> Vec<Statement> {
        let rng = &mut self.rng;
        self.clock += rng.random_range(1..=5);
        let station = rng.random_range(0..STATIONS);
        let sensor = rng.random_range(0..SENSORS_PER_STATION);
        let (property, unit) = PROPERTIES[(station as usize + sensor as usize) % PROPERTIES.len()];
        let value: f64 = rng.random_range(-20.0..45.0);
        let obs = iri(format!("{SENSORS}obs/st{station:03}-{}", self.seq));
        vec![
            t(&obs, RDF_TYPE, iri(format!("{SOSA}Observation"))),
            t(&obs, format!("{SOSA}madeBySensor"), iri(format!("{SENSORS}sensor/st{station:03}-{sensor}"))),
            t(&obs, format!("{SOSA}observedProperty"), iri(format!("{SENSORS}property/{property}"))),
            t(&obs, format!("{SOSA}resultTime"), typed(timestamp(self.clock), "dateTime")),
            t(&obs, format!("{SOSA}hasSimpleResult"), typed(format!("{value:.2}"), "double")),
            t(&obs, "http://qudt.org/schema/qudt/unit", iri(format!("http://qudt.org/vocab/unit/{unit}"))),
        ]
    }

    fn social_event(&mut self) -> Vec<Statement> {
        const WORDS: &[&str] = &[
            "stream", "graph", "today", "data", "coffee", "rain", "music", "open", "linked", "fast", "river",
            "night", "city", "build", "share",
        ];
        const LANGS: &[&str] = &["en", "de", "pl", "fr", "es"];
        let rng = &mut self.rng;
        let author = self.users.choose(rng).expect("non-empty").clone();
        let user = iri(format!("{SOCIAL}user/{author}"));
        let post = iri(format!("{SOCIAL}post/{:016x}", rng.random::<u64>()));
        let words = rng.random_range(3..12);
        let text: Vec<&str> = (0..words).map(|_| *WORDS.choose(rng).expect("non-empty")).collect();
        self.clock += rng.random_range(1..=60);
        let mut out = vec![
            t(&post, RDF_TYPE, iri(format!("{SIOC}Post"))),
            t(&post, format!("{SIOC}has_creator"), user.clone()),
            t(&post, format!("{SIOC}content"), lang(text.join(" "), LANGS.choose(rng).expect("non-empty"))),
            t(&post, "http://purl.org/dc/terms/created", typed(timestamp(self.clock), "dateTime")),
        ];
        for _ in 0..rng.random_range(0..3) {
            let other = self.users.choose(rng).expect("non-empty");
            out.push(t(&user, format!("{FOAF}knows"), iri(format!("{SOCIAL}user/{other}"))));
        }
        if rng.random_bool(0.5) {
            let liker = self.users.choose(rng).expect("non-empty");
            out.push(t(&iri(format!("{SOCIAL}user/{liker}")), format!("{SOCIAL}vocab#likes"), post));
        }
        out
    }

    fn described_thing(&mut self) -> Vec<Statement> {
        let rng = &mut self.rng;
        let b = Term::BlankNode(format!("n{}", self.seq));
        let thing = iri(format!("http://example.com/things#item{}", rng.random_range(0..2000)));
        vec![
            t(&thing, "http://schema.org/address", b.clone()),
            t(&b, "http://schema.org/postalCode", Term::simple_literal(format!("{:05}", rng.random_range(0..99_999)))),
            t(&b, "http://schema.org/floor", typed(rng.random_range(0..40).to_string(), "integer")),
        ]
    }
}

impl Iterator for Generator {
    type Item = Statement;

    fn next(&mut self) -> Option<Statement> {
        loop {
            if let Some(s) = self.buffer.next() {
                return Some(s);
            }
            self.buffer = self.refill().into_iter();
        }
    }
}

/// Exactly `n` statements of `flavor`.
pub fn generate(flavor: Flavor, n: usize, seed: u64) -> Vec<Statement> {
    Generator::new(flavor, seed).take(n).collect()
}

/// Writes exactly `n` N-Triples lines.
pub fn write_synthetic(path: &Path, flavor: Flavor, n: usize, seed: u64) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    let mut line = String::new();
    for s in Generator::new(flavor, seed).take(n) {
        line.clear();
        write_statement_to(&mut line, &s)?;
        w.write_all(line.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// The N-Triples rendering of `n` statements of `flavor`, in memory.
pub fn synthetic_ntriples(flavor: Flavor, n: usize, seed: u64) -> String {
    let mut out = String::new();
    for s in Generator::new(flavor, seed).take(n) {
        write_statement_to(&mut out, &s).expect("generated statements are representable");
    }
    out
}

/// Arbitrary statements valid for `options`: IRIs with shared prefixes, blank
/// nodes, simple/language/typed literals, and, where the options allow,
/// quads, quoted triples and generalized positions. Runs of repeated
/// subjects and whole statements are mixed in to exercise repeat elision.
pub fn random_stream(options: &StreamOptions, n: usize, seed: u64) -> Vec<Statement> {
    let mut g = RandomTerms {
        rng: ChaCha8Rng::seed_from_u64(seed),
        options: options.clone(),
    };
    let mut out: Vec<Statement> = Vec::with_capacity(n);
    while out.len() < n {
        let next = match (g.rng.random_range(0..10), out.last()) {
            (0, Some(prev)) => prev.clone(),
            (1..=3, Some(prev)) => {
                let fresh = g.statement();
                match fresh {
                    Statement::Triple(t) => Statement::triple(prev.subject().clone(), t.predicate, t.object),
                    Statement::Quad(q) => Statement::quad(prev.subject().clone(), q.predicate, q.object, q.graph),
                }
            }
            _ => g.statement(),
        };
        out.push(next);
    }
    out
}

struct RandomTerms {
    rng: ChaCha8Rng,
    options: StreamOptions,
}

impl RandomTerms {
    fn statement(&mut self) -> Statement {
        let s = self.term(0, 0);
        let p = self.term(1, 0);
        let o = self.term(2, 0);
        if self.options.physical_type == PhysicalType::Quads {
            let g = if self.rng.random_bool(0.25) {
                GraphName::DefaultGraph
            } else {
                GraphName::Named(self.term(3, 2))
            };
            Statement::quad(s, p, o, g)
        } else {
            Statement::triple(s, p, o)
        }
    }

    /// position: 0 subject, 1 predicate, 2 object, 3 graph.
    fn term(&mut self, position: u8, depth: u32) -> Term {
        let generalized = self.options.generalized;
        let quoted_ok = self.options.rdf_star && depth < 2 && (generalized || position == 0 || position == 2);
        let roll = self.rng.random_range(0..20);
        if quoted_ok && roll == 0 {
            return Term::quoted(Triple::new(
                self.term(0, depth + 1),
                self.term(1, depth + 1),
                self.term(2, depth + 1),
            ));
        }
        let kind = if generalized {
            roll % 3
        } else {
            match position {
                1 => 0,
                0 | 3 => roll % 2,
                _ => roll % 3,
            }
        };
        match kind {
            0 => self.iri(),
            1 => Term::BlankNode(format!("b{}", self.rng.random_range(0..200))),
            _ => self.literal(),
        }
    }

    fn iri(&mut self) -> Term {
        const PREFIXES: &[&str] = &[
            "http://example.org/",
            "http://example.org/vocab#",
            "https://data.example.com/set/a/",
            "urn:isbn:",
            "http://www.w3.org/2000/01/rdf-schema#",
        ];
        let rng = &mut self.rng;
        let prefix = PREFIXES.choose(rng).expect("non-empty");
        // mostly a working set that fits the tables, sometimes a fresh name
        let name = if rng.random_bool(0.8) {
            format!("r{}", rng.random_range(0..300))
        } else {
            format!("x{:x}", rng.random::<u64>())
        };
        iri(format!("{prefix}{name}"))
    }

    fn literal(&mut self) -> Term {
        const DATATYPES: &[&str] = &["integer", "double", "dateTime", "boolean", "string"];
        let rng = &mut self.rng;
        let lexical = match rng.random_range(0..4) {
            0 => rng.random_range(-1000..1000).to_string(),
            1 => String::new(),
            2 => "multi\nline \"quoted\" \\ text ✓".to_owned(),
            _ => (0..rng.random_range(1..20)).map(|_| rng.random::<char>()).collect(),
        };
        let kind = match rng.random_range(0..3) {
            0 => LiteralKind::Simple,
            1 => LiteralKind::LangTagged(["en", "en-GB", "pl", "zh-Hans"].choose(rng).expect("non-empty").to_string()),
            _ if self.options.max_datatype_table == 0 => LiteralKind::Simple,
            _ => LiteralKind::Typed(format!("{XSD}{}", DATATYPES.choose(rng).expect("non-empty"))),
        };
        Term::Literal(Literal { lexical, kind })
    }
}
