//! Conversion between the hand-written wire model and the prost types
//! generated from `jelly.proto`, plus a generator of arbitrary wire frames.

use jelly_core::proto::{
    LookupEntry, PhysicalType, StreamFrame, StreamOptions, StreamRow, TableKind, WireLiteral,
    WireLiteralKind, WireQuad, WireTerm, WireTriple,
};
use jelly_proto_oracle as pb;
use pb::rdf_literal::LiteralKind as PbKind;
use pb::rdf_stream_row::Row as PbRow;
use pb::rdf_term::Term as PbTerm;
use rand::Rng;

pub fn to_pb_frame(f: &StreamFrame) -> pb::RdfStreamFrame {
    pb::RdfStreamFrame {
        rows: f.rows.iter().map(to_pb_row).collect(),
    }
}

fn to_pb_row(r: &StreamRow) -> pb::RdfStreamRow {
    let row = match r {
        StreamRow::Options(o) => PbRow::Options(pb::RdfStreamOptions {
            stream_name: o.stream_name.clone(),
            physical_type: match o.physical_type {
                PhysicalType::Unspecified => pb::RdfPhysicalType::Unspecified,
                PhysicalType::Triples => pb::RdfPhysicalType::Triples,
                PhysicalType::Quads => pb::RdfPhysicalType::Quads,
            } as i32,
            generalized_statements: o.generalized,
            rdf_star: o.rdf_star,
            max_name_table_size: o.max_name_table,
            max_prefix_table_size: o.max_prefix_table,
            max_datatype_table_size: o.max_datatype_table,
            version: o.version,
        }),
        StreamRow::Entry(e) => {
            let entry = pb::RdfLookupEntry {
                id: e.id,
                value: e.value.clone(),
            };
            match e.table {
                TableKind::Prefix => PbRow::Prefix(entry),
                TableKind::Name => PbRow::Name(entry),
                TableKind::Datatype => PbRow::Datatype(entry),
            }
        }
        StreamRow::Triple(t) => PbRow::Triple(to_pb_triple(t)),
        StreamRow::Quad(q) => PbRow::Quad(pb::RdfQuad {
            subject: Some(to_pb_term(&q.subject)),
            predicate: Some(to_pb_term(&q.predicate)),
            object: Some(to_pb_term(&q.object)),
            graph: Some(to_pb_term(&q.graph)),
        }),
    };
    pb::RdfStreamRow { row: Some(row) }
}

fn to_pb_triple(t: &WireTriple) -> pb::RdfTriple {
    pb::RdfTriple {
        subject: Some(Box::new(to_pb_term(&t.subject))),
        predicate: Some(Box::new(to_pb_term(&t.predicate))),
        object: Some(Box::new(to_pb_term(&t.object))),
    }
}

fn to_pb_term(t: &WireTerm) -> pb::RdfTerm {
    let term = match t {
        WireTerm::Iri { prefix_id, name_id } => PbTerm::Iri(pb::RdfIri {
            prefix_id: *prefix_id,
            name_id: *name_id,
        }),
        WireTerm::BNode(b) => PbTerm::Bnode(b.clone()),
        WireTerm::Literal(l) => PbTerm::Literal(pb::RdfLiteral {
            lex: l.lexical.clone(),
            literal_kind: match &l.kind {
                WireLiteralKind::None => None,
                WireLiteralKind::LangTag(t) => Some(PbKind::Langtag(t.clone())),
                WireLiteralKind::Datatype(d) => Some(PbKind::Datatype(*d)),
            },
        }),
        WireTerm::QuotedTriple(t) => PbTerm::TripleTerm(Box::new(to_pb_triple(t))),
        WireTerm::Repeat => PbTerm::Repeat(pb::RdfRepeat {}),
        WireTerm::DefaultGraph => PbTerm::DefaultGraph(pb::RdfDefaultGraph {}),
    };
    pb::RdfTerm { term: Some(term) }
}

/// Panics on messages the hand-written model cannot represent (missing
/// oneof values), which the generators never produce.
pub fn from_pb_frame(f: &pb::RdfStreamFrame) -> StreamFrame {
    StreamFrame::new(f.rows.iter().map(from_pb_row).collect())
}

fn from_pb_row(r: &pb::RdfStreamRow) -> StreamRow {
    let entry = |table, e: &pb::RdfLookupEntry| {
        StreamRow::Entry(LookupEntry {
            table,
            id: e.id,
            value: e.value.clone(),
        })
    };
    match r.row.as_ref().expect("row set") {
        PbRow::Options(o) => StreamRow::Options(StreamOptions {
            stream_name: o.stream_name.clone(),
            physical_type: match o.physical_type() {
                pb::RdfPhysicalType::Unspecified => PhysicalType::Unspecified,
                pb::RdfPhysicalType::Triples => PhysicalType::Triples,
                pb::RdfPhysicalType::Quads => PhysicalType::Quads,
            },
            generalized: o.generalized_statements,
            rdf_star: o.rdf_star,
            max_prefix_table: o.max_prefix_table_size,
            max_name_table: o.max_name_table_size,
            max_datatype_table: o.max_datatype_table_size,
            version: o.version,
        }),
        PbRow::Prefix(e) => entry(TableKind::Prefix, e),
        PbRow::Name(e) => entry(TableKind::Name, e),
        PbRow::Datatype(e) => entry(TableKind::Datatype, e),
        PbRow::Triple(t) => StreamRow::Triple(from_pb_triple(t)),
        PbRow::Quad(q) => StreamRow::Quad(WireQuad {
            subject: from_pb_term(q.subject.as_ref().expect("subject")),
            predicate: from_pb_term(q.predicate.as_ref().expect("predicate")),
            object: from_pb_term(q.object.as_ref().expect("object")),
            graph: from_pb_term(q.graph.as_ref().expect("graph")),
        }),
    }
}

fn from_pb_triple(t: &pb::RdfTriple) -> WireTriple {
    WireTriple {
        subject: from_pb_term(t.subject.as_deref().expect("subject")),
        predicate: from_pb_term(t.predicate.as_deref().expect("predicate")),
        object: from_pb_term(t.object.as_deref().expect("object")),
    }
}

fn from_pb_term(t: &pb::RdfTerm) -> WireTerm {
    match t.term.as_ref().expect("term set") {
        PbTerm::Iri(i) => WireTerm::Iri {
            prefix_id: i.prefix_id,
            name_id: i.name_id,
        },
        PbTerm::Bnode(b) => WireTerm::BNode(b.clone()),
        PbTerm::Literal(l) => WireTerm::Literal(WireLiteral {
            lexical: l.lex.clone(),
            kind: match &l.literal_kind {
                None => WireLiteralKind::None,
                Some(PbKind::Langtag(t)) => WireLiteralKind::LangTag(t.clone()),
                Some(PbKind::Datatype(d)) => WireLiteralKind::Datatype(*d),
            },
        }),
        PbTerm::TripleTerm(t) => WireTerm::QuotedTriple(Box::new(from_pb_triple(t))),
        PbTerm::Repeat(_) => WireTerm::Repeat,
        PbTerm::DefaultGraph(_) => WireTerm::DefaultGraph,
    }
}

/// A structurally arbitrary frame: ids, sizes and strings cover zero,
/// boundary and multi-byte varint values; rows need not form a valid stream.
pub fn random_frame<R: Rng>(rng: &mut R) -> StreamFrame {
    let n = match rng.random_range(0..10) {
        0 => 0,
        1..=7 => rng.random_range(1..20),
        _ => rng.random_range(20..200),
    };
    StreamFrame::new((0..n).map(|_| random_row(rng)).collect())
}

fn random_u32<R: Rng>(rng: &mut R) -> u32 {
    match rng.random_range(0..6) {
        0 => 0,
        1 => rng.random_range(1..128),
        2 => rng.random_range(128..16_384),
        3 => u32::MAX,
        4 => 1 << 28,
        _ => rng.random(),
    }
}

fn random_string<R: Rng>(rng: &mut R) -> String {
    match rng.random_range(0..5) {
        0 => String::new(),
        1 => "http://example.org/vocab#".into(),
        2 => (0..rng.random_range(1..300)).map(|_| rng.random_range('a'..='z')).collect(),
        3 => "ü€𝄞 ж".repeat(rng.random_range(1..4)),
        _ => (0..rng.random_range(1..12)).map(|_| rng.random::<char>()).collect(),
    }
}

fn random_row<R: Rng>(rng: &mut R) -> StreamRow {
    match rng.random_range(0..8) {
        0 => StreamRow::Options(StreamOptions {
            stream_name: random_string(rng),
            physical_type: [PhysicalType::Unspecified, PhysicalType::Triples, PhysicalType::Quads]
                [rng.random_range(0..3)],
            generalized: rng.random(),
            rdf_star: rng.random(),
            max_prefix_table: random_u32(rng),
            max_name_table: random_u32(rng),
            max_datatype_table: random_u32(rng),
            version: random_u32(rng),
        }),
        1..=3 => StreamRow::Entry(LookupEntry {
            table: [TableKind::Prefix, TableKind::Name, TableKind::Datatype][rng.random_range(0..3)],
            id: random_u32(rng),
            value: random_string(rng),
        }),
        4..=6 => StreamRow::Triple(random_triple(rng, 0)),
        _ => StreamRow::Quad(WireQuad {
            subject: random_term(rng, 0),
            predicate: random_term(rng, 0),
            object: random_term(rng, 0),
            graph: random_term(rng, 0),
        }),
    }
}

fn random_triple<R: Rng>(rng: &mut R, depth: u32) -> WireTriple {
    WireTriple {
        subject: random_term(rng, depth),
        predicate: random_term(rng, depth),
        object: random_term(rng, depth),
    }
}

fn random_term<R: Rng>(rng: &mut R, depth: u32) -> WireTerm {
    let top = if depth < 3 { 7 } else { 6 };
    match rng.random_range(0..top) {
        0 | 1 => WireTerm::Iri {
            prefix_id: random_u32(rng),
            name_id: random_u32(rng),
        },
        2 => WireTerm::BNode(random_string(rng)),
        3 => WireTerm::Literal(WireLiteral {
            lexical: random_string(rng),
            kind: match rng.random_range(0..3) {
                0 => WireLiteralKind::None,
                1 => WireLiteralKind::LangTag(random_string(rng)),
                _ => WireLiteralKind::Datatype(random_u32(rng)),
            },
        }),
        4 => WireTerm::Repeat,
        5 => WireTerm::DefaultGraph,
        _ => WireTerm::QuotedTriple(Box::new(random_triple(rng, depth + 1))),
    }
}
