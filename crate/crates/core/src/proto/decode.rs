use super::wire::{Input, WIRE_LEN, WIRE_VARINT};
use super::{
    DecodeError, LookupEntry, PhysicalType, StreamAck, StreamFrame, StreamOptions, StreamRow,
    TableKind, WireLiteral, WireLiteralKind, WireQuad, WireTerm, WireTriple,
};

const MAX_DEPTH: usize = 100;

/// Decodes a frame. Unknown fields are skipped; absent scalars read as zero
/// or empty. For singular fields that occur more than once, the last
/// occurrence wins.
pub fn decode_frame(bytes: &[u8]) -> Result<StreamFrame, DecodeError> {
    let mut input = Input::new(bytes);
    let mut rows = Vec::new();
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        if field == 1 {
            input.expect(field, wt, WIRE_LEN)?;
            rows.push(decode_row(input.bytes()?)?);
        } else {
            input.skip(wt)?;
        }
    }
    Ok(StreamFrame { rows })
}

pub fn decode_ack(bytes: &[u8]) -> Result<StreamAck, DecodeError> {
    let mut input = Input::new(bytes);
    let mut ack = StreamAck::default();
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        if field == 1 {
            input.expect(field, wt, WIRE_VARINT)?;
            ack.received_rows = input.varint()?;
        } else {
            input.skip(wt)?;
        }
    }
    Ok(ack)
}

fn decode_row(bytes: &[u8]) -> Result<StreamRow, DecodeError> {
    let mut input = Input::new(bytes);
    let mut row = None;
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        if !(1..=6).contains(&field) {
            input.skip(wt)?;
            continue;
        }
        input.expect(field, wt, WIRE_LEN)?;
        let body = input.bytes()?;
        row = Some(match field {
            1 => StreamRow::Options(decode_options(body)?),
            2 => StreamRow::Triple(decode_triple(body, 0)?),
            3 => StreamRow::Quad(decode_quad(body)?),
            4 => StreamRow::Entry(decode_entry(TableKind::Prefix, body)?),
            5 => StreamRow::Entry(decode_entry(TableKind::Name, body)?),
            _ => StreamRow::Entry(decode_entry(TableKind::Datatype, body)?),
        });
    }
    row.ok_or(DecodeError::EmptyRow)
}

fn decode_options(bytes: &[u8]) -> Result<StreamOptions, DecodeError> {
    let mut input = Input::new(bytes);
    let mut o = StreamOptions {
        stream_name: String::new(),
        physical_type: PhysicalType::Unspecified,
        generalized: false,
        rdf_star: false,
        max_prefix_table: 0,
        max_name_table: 0,
        max_datatype_table: 0,
        version: 0,
    };
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        match field {
            1 => {
                input.expect(field, wt, WIRE_LEN)?;
                o.stream_name = input.string()?.to_owned();
            }
            2..=8 => {
                input.expect(field, wt, WIRE_VARINT)?;
                let v = input.varint()?;
                match field {
                    2 => {
                        o.physical_type = match v {
                            0 => PhysicalType::Unspecified,
                            1 => PhysicalType::Triples,
                            2 => PhysicalType::Quads,
                            other => return Err(DecodeError::UnknownPhysicalType(other)),
                        }
                    }
                    3 => o.generalized = v != 0,
                    4 => o.rdf_star = v != 0,
                    5 => o.max_name_table = v as u32,
                    6 => o.max_prefix_table = v as u32,
                    7 => o.max_datatype_table = v as u32,
                    _ => o.version = v as u32,
                }
            }
            _ => input.skip(wt)?,
        }
    }
    Ok(o)
}

fn decode_entry(table: TableKind, bytes: &[u8]) -> Result<LookupEntry, DecodeError> {
    let mut input = Input::new(bytes);
    let mut entry = LookupEntry {
        table,
        id: 0,
        value: String::new(),
    };
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        match field {
            1 => {
                input.expect(field, wt, WIRE_VARINT)?;
                entry.id = input.varint()? as u32;
            }
            2 => {
                input.expect(field, wt, WIRE_LEN)?;
                entry.value = input.string()?.to_owned();
            }
            _ => input.skip(wt)?,
        }
    }
    Ok(entry)
}

fn decode_terms<const N: usize>(
    bytes: &[u8],
    depth: usize,
) -> Result<[Option<WireTerm>; N], DecodeError> {
    let mut input = Input::new(bytes);
    let mut terms: [Option<WireTerm>; N] = std::array::from_fn(|_| None);
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        let slot = field as usize;
        if (1..=N).contains(&slot) {
            input.expect(field, wt, WIRE_LEN)?;
            terms[slot - 1] = Some(decode_term(input.bytes()?, depth)?);
        } else {
            input.skip(wt)?;
        }
    }
    Ok(terms)
}

fn decode_triple(bytes: &[u8], depth: usize) -> Result<WireTriple, DecodeError> {
    let [s, p, o] = decode_terms::<3>(bytes, depth)?;
    Ok(WireTriple {
        subject: s.ok_or(DecodeError::MissingTerm("subject"))?,
        predicate: p.ok_or(DecodeError::MissingTerm("predicate"))?,
        object: o.ok_or(DecodeError::MissingTerm("object"))?,
    })
}

fn decode_quad(bytes: &[u8]) -> Result<WireQuad, DecodeError> {
    let [s, p, o, g] = decode_terms::<4>(bytes, 0)?;
    Ok(WireQuad {
        subject: s.ok_or(DecodeError::MissingTerm("subject"))?,
        predicate: p.ok_or(DecodeError::MissingTerm("predicate"))?,
        object: o.ok_or(DecodeError::MissingTerm("object"))?,
        graph: g.ok_or(DecodeError::MissingTerm("graph"))?,
    })
}

fn decode_term(bytes: &[u8], depth: usize) -> Result<WireTerm, DecodeError> {
    let mut input = Input::new(bytes);
    let mut term = None;
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        match field {
            1..=6 => {
                input.expect(field, wt, WIRE_LEN)?;
                let body = input.bytes()?;
                term = Some(match field {
                    1 => decode_iri(body)?,
                    2 => WireTerm::BNode(
                        std::str::from_utf8(body).map_err(|_| DecodeError::InvalidUtf8)?.to_owned(),
                    ),
                    3 => WireTerm::Literal(decode_literal(body)?),
                    4 => {
                        if depth >= MAX_DEPTH {
                            return Err(DecodeError::RecursionLimit);
                        }
                        WireTerm::QuotedTriple(Box::new(decode_triple(body, depth + 1)?))
                    }
                    5 => {
                        skip_all(body)?;
                        WireTerm::Repeat
                    }
                    _ => {
                        skip_all(body)?;
                        WireTerm::DefaultGraph
                    }
                });
            }
            _ => input.skip(wt)?,
        }
    }
    term.ok_or(DecodeError::EmptyTerm)
}

/// Validates the body of an empty message, which may still carry unknown
/// fields.
fn skip_all(bytes: &[u8]) -> Result<(), DecodeError> {
    let mut input = Input::new(bytes);
    while !input.is_empty() {
        let (_, wt) = input.key()?;
        input.skip(wt)?;
    }
    Ok(())
}

fn decode_iri(bytes: &[u8]) -> Result<WireTerm, DecodeError> {
    let mut input = Input::new(bytes);
    let (mut prefix_id, mut name_id) = (0, 0);
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        match field {
            1 | 2 => {
                input.expect(field, wt, WIRE_VARINT)?;
                let v = input.varint()? as u32;
                if field == 1 {
                    prefix_id = v;
                } else {
                    name_id = v;
                }
            }
            _ => input.skip(wt)?,
        }
    }
    Ok(WireTerm::Iri { prefix_id, name_id })
}

fn decode_literal(bytes: &[u8]) -> Result<WireLiteral, DecodeError> {
    let mut input = Input::new(bytes);
    let mut lit = WireLiteral {
        lexical: String::new(),
        kind: WireLiteralKind::None,
    };
    while !input.is_empty() {
        let (field, wt) = input.key()?;
        match field {
            1 => {
                input.expect(field, wt, WIRE_LEN)?;
                lit.lexical = input.string()?.to_owned();
            }
            2 => {
                input.expect(field, wt, WIRE_LEN)?;
                lit.kind = WireLiteralKind::LangTag(input.string()?.to_owned());
            }
            3 => {
                input.expect(field, wt, WIRE_VARINT)?;
                lit.kind = WireLiteralKind::Datatype(input.varint()? as u32);
            }
            _ => input.skip(wt)?,
        }
    }
    Ok(lit)
}
