use super::wire::{
    key_len, len_field_len, put_bytes_field, put_key, put_uint_field, put_varint, uint_field_len,
    varint_len, WIRE_LEN, WIRE_VARINT,
};
use super::{
    LookupEntry, StreamAck, StreamFrame, StreamOptions, StreamRow, TableKind, WireLiteral,
    WireLiteralKind, WireQuad, WireTerm, WireTriple,
};

// Nested messages are written as key, length, body. Lengths are computed up
// front so the output is produced in a single pass without back-patching.

fn string_field_len(field: u32, s: &str) -> usize {
    if s.is_empty() {
        0
    } else {
        len_field_len(field, s.len())
    }
}

fn put_string_field(buf: &mut Vec<u8>, field: u32, s: &str) {
    if !s.is_empty() {
        put_bytes_field(buf, field, s.as_bytes());
    }
}

fn put_message_header(buf: &mut Vec<u8>, field: u32, len: usize) {
    put_key(buf, field, WIRE_LEN);
    put_varint(buf, len as u64);
}

fn options_len(o: &StreamOptions) -> usize {
    string_field_len(1, &o.stream_name)
        + uint_field_len(2, o.physical_type.to_wire())
        + uint_field_len(3, u64::from(o.generalized))
        + uint_field_len(4, u64::from(o.rdf_star))
        + uint_field_len(5, u64::from(o.max_name_table))
        + uint_field_len(6, u64::from(o.max_prefix_table))
        + uint_field_len(7, u64::from(o.max_datatype_table))
        + uint_field_len(8, u64::from(o.version))
}

fn put_options(buf: &mut Vec<u8>, o: &StreamOptions) {
    put_string_field(buf, 1, &o.stream_name);
    put_uint_field(buf, 2, o.physical_type.to_wire());
    put_uint_field(buf, 3, u64::from(o.generalized));
    put_uint_field(buf, 4, u64::from(o.rdf_star));
    put_uint_field(buf, 5, u64::from(o.max_name_table));
    put_uint_field(buf, 6, u64::from(o.max_prefix_table));
    put_uint_field(buf, 7, u64::from(o.max_datatype_table));
    put_uint_field(buf, 8, u64::from(o.version));
}

fn entry_len(e: &LookupEntry) -> usize {
    uint_field_len(1, u64::from(e.id)) + string_field_len(2, &e.value)
}

fn put_entry(buf: &mut Vec<u8>, e: &LookupEntry) {
    put_uint_field(buf, 1, u64::from(e.id));
    put_string_field(buf, 2, &e.value);
}

fn literal_len(l: &WireLiteral) -> usize {
    string_field_len(1, &l.lexical)
        + match &l.kind {
            WireLiteralKind::None => 0,
            // Oneof members are written even when they hold a default value.
            WireLiteralKind::LangTag(tag) => len_field_len(2, tag.len()),
            WireLiteralKind::Datatype(id) => key_len(3) + varint_len(u64::from(*id)),
        }
}

fn put_literal(buf: &mut Vec<u8>, l: &WireLiteral) {
    put_string_field(buf, 1, &l.lexical);
    match &l.kind {
        WireLiteralKind::None => {}
        WireLiteralKind::LangTag(tag) => put_bytes_field(buf, 2, tag.as_bytes()),
        WireLiteralKind::Datatype(id) => {
            put_key(buf, 3, WIRE_VARINT);
            put_varint(buf, u64::from(*id));
        }
    }
}

fn term_len(t: &WireTerm) -> usize {
    match t {
        WireTerm::Iri { prefix_id, name_id } => len_field_len(
            1,
            uint_field_len(1, u64::from(*prefix_id)) + uint_field_len(2, u64::from(*name_id)),
        ),
        WireTerm::BNode(label) => len_field_len(2, label.len()),
        WireTerm::Literal(l) => len_field_len(3, literal_len(l)),
        WireTerm::QuotedTriple(t) => len_field_len(4, triple_len(t)),
        WireTerm::Repeat => len_field_len(5, 0),
        WireTerm::DefaultGraph => len_field_len(6, 0),
    }
}

fn put_term(buf: &mut Vec<u8>, t: &WireTerm) {
    match t {
        WireTerm::Iri { prefix_id, name_id } => {
            let len =
                uint_field_len(1, u64::from(*prefix_id)) + uint_field_len(2, u64::from(*name_id));
            put_message_header(buf, 1, len);
            put_uint_field(buf, 1, u64::from(*prefix_id));
            put_uint_field(buf, 2, u64::from(*name_id));
        }
        WireTerm::BNode(label) => put_bytes_field(buf, 2, label.as_bytes()),
        WireTerm::Literal(l) => {
            put_message_header(buf, 3, literal_len(l));
            put_literal(buf, l);
        }
        WireTerm::QuotedTriple(t) => {
            put_message_header(buf, 4, triple_len(t));
            put_triple(buf, t);
        }
        WireTerm::Repeat => put_message_header(buf, 5, 0),
        WireTerm::DefaultGraph => put_message_header(buf, 6, 0),
    }
}

fn triple_len(t: &WireTriple) -> usize {
    len_field_len(1, term_len(&t.subject))
        + len_field_len(2, term_len(&t.predicate))
        + len_field_len(3, term_len(&t.object))
}

fn put_term_field(buf: &mut Vec<u8>, field: u32, t: &WireTerm) {
    put_message_header(buf, field, term_len(t));
    put_term(buf, t);
}

fn put_triple(buf: &mut Vec<u8>, t: &WireTriple) {
    put_term_field(buf, 1, &t.subject);
    put_term_field(buf, 2, &t.predicate);
    put_term_field(buf, 3, &t.object);
}

fn quad_len(q: &WireQuad) -> usize {
    len_field_len(1, term_len(&q.subject))
        + len_field_len(2, term_len(&q.predicate))
        + len_field_len(3, term_len(&q.object))
        + len_field_len(4, term_len(&q.graph))
}

fn put_quad(buf: &mut Vec<u8>, q: &WireQuad) {
    put_term_field(buf, 1, &q.subject);
    put_term_field(buf, 2, &q.predicate);
    put_term_field(buf, 3, &q.object);
    put_term_field(buf, 4, &q.graph);
}

fn entry_field(table: TableKind) -> u32 {
    match table {
        TableKind::Prefix => 4,
        TableKind::Name => 5,
        TableKind::Datatype => 6,
    }
}

fn row_len(row: &StreamRow) -> usize {
    match row {
        StreamRow::Options(o) => len_field_len(1, options_len(o)),
        StreamRow::Triple(t) => len_field_len(2, triple_len(t)),
        StreamRow::Quad(q) => len_field_len(3, quad_len(q)),
        StreamRow::Entry(e) => len_field_len(entry_field(e.table), entry_len(e)),
    }
}

fn put_row(buf: &mut Vec<u8>, row: &StreamRow) {
    match row {
        StreamRow::Options(o) => {
            put_message_header(buf, 1, options_len(o));
            put_options(buf, o);
        }
        StreamRow::Triple(t) => {
            put_message_header(buf, 2, triple_len(t));
            put_triple(buf, t);
        }
        StreamRow::Quad(q) => {
            put_message_header(buf, 3, quad_len(q));
            put_quad(buf, q);
        }
        StreamRow::Entry(e) => {
            put_message_header(buf, entry_field(e.table), entry_len(e));
            put_entry(buf, e);
        }
    }
}

/// Exact size of [`encode_frame`]'s output.
pub fn encoded_frame_len(frame: &StreamFrame) -> usize {
    frame.rows.iter().map(|r| len_field_len(1, row_len(r))).sum()
}

/// Encodes a frame. Rust strings are always valid UTF-8, so encoding cannot
/// fail.
pub fn encode_frame(frame: &StreamFrame) -> Vec<u8> {
    let mut buf = Vec::with_capacity(encoded_frame_len(frame));
    encode_frame_into(frame, &mut buf);
    buf
}

/// Appends the encoding of `frame` to `buf`.
pub fn encode_frame_into(frame: &StreamFrame, buf: &mut Vec<u8>) {
    for row in &frame.rows {
        put_message_header(buf, 1, row_len(row));
        put_row(buf, row);
    }
}

pub fn encode_ack(ack: &StreamAck) -> Vec<u8> {
    let mut buf = Vec::with_capacity(uint_field_len(1, ack.received_rows));
    put_uint_field(&mut buf, 1, ack.received_rows);
    buf
}
