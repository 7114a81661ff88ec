//! Logical wire messages of a Jelly stream and their Protocol Buffers
//! encoding.
//!
//! The normative schema is `proto/jelly.proto`. [`encode_frame`] and
//! [`decode_frame`] implement it by hand: encoding is deterministic (fields in
//! ascending field-number order, proto3 default values omitted) and decoding
//! skips unknown fields.

mod decode;
mod encode;
pub(crate) mod wire;

use std::fmt;

use thiserror::Error;

pub use decode::{decode_ack, decode_frame};
pub use encode::{encode_ack, encode_frame, encode_frame_into, encoded_frame_len};

/// Stream format version understood by this crate.
pub const VERSION: u32 = 1;

/// Upper bound on every lookup table size.
pub const MAX_TABLE_SIZE: u32 = 1 << 28;

/// The name table must hold at least this many entries.
pub const MIN_NAME_TABLE_SIZE: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhysicalType {
    Unspecified,
    Triples,
    Quads,
}

impl PhysicalType {
    pub(crate) fn to_wire(self) -> u64 {
        match self {
            PhysicalType::Unspecified => 0,
            PhysicalType::Triples => 1,
            PhysicalType::Quads => 2,
        }
    }
}

/// Stream header announcing the compression settings to the consumer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StreamOptions {
    pub stream_name: String,
    pub physical_type: PhysicalType,
    pub generalized: bool,
    pub rdf_star: bool,
    /// 0 disables the prefix table.
    pub max_prefix_table: u32,
    pub max_name_table: u32,
    /// 0 forbids typed literals on the stream.
    pub max_datatype_table: u32,
    pub version: u32,
}

impl Default for StreamOptions {
    fn default() -> Self {
        StreamOptions {
            stream_name: String::new(),
            physical_type: PhysicalType::Triples,
            generalized: false,
            rdf_star: false,
            max_prefix_table: 150,
            max_name_table: 4000,
            max_datatype_table: 32,
            version: VERSION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptionsError {
    #[error("max_prefix_table {0} exceeds 2^28")]
    PrefixTableTooLarge(u32),
    #[error("max_name_table {0} exceeds 2^28")]
    NameTableTooLarge(u32),
    #[error("max_name_table {0} is below the minimum of 8")]
    NameTableTooSmall(u32),
    #[error("max_datatype_table {0} exceeds 2^28")]
    DatatypeTableTooLarge(u32),
    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),
    #[error("physical type is unspecified")]
    UnspecifiedPhysicalType,
}

/// Checks the [`StreamOptions`] invariants.
pub fn validate_options(opts: &StreamOptions) -> Result<(), OptionsError> {
    if opts.version != VERSION {
        return Err(OptionsError::UnsupportedVersion(opts.version));
    }
    if opts.physical_type == PhysicalType::Unspecified {
        return Err(OptionsError::UnspecifiedPhysicalType);
    }
    if opts.max_prefix_table > MAX_TABLE_SIZE {
        return Err(OptionsError::PrefixTableTooLarge(opts.max_prefix_table));
    }
    if opts.max_name_table > MAX_TABLE_SIZE {
        return Err(OptionsError::NameTableTooLarge(opts.max_name_table));
    }
    if opts.max_name_table < MIN_NAME_TABLE_SIZE {
        return Err(OptionsError::NameTableTooSmall(opts.max_name_table));
    }
    if opts.max_datatype_table > MAX_TABLE_SIZE {
        return Err(OptionsError::DatatypeTableTooLarge(opts.max_datatype_table));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    Prefix,
    Name,
    Datatype,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableKind::Prefix => "prefix",
            TableKind::Name => "name",
            TableKind::Datatype => "datatype",
        })
    }
}

/// Assigns `value` to slot `id` of one lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LookupEntry {
    pub table: TableKind,
    pub id: u32,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WireLiteralKind {
    None,
    LangTag(String),
    Datatype(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireLiteral {
    pub lexical: String,
    pub kind: WireLiteralKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WireTerm {
    /// Id 0 stands for an empty component.
    Iri { prefix_id: u32, name_id: u32 },
    BNode(String),
    Literal(WireLiteral),
    QuotedTriple(Box<WireTriple>),
    Repeat,
    DefaultGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireTriple {
    pub subject: WireTerm,
    pub predicate: WireTerm,
    pub object: WireTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WireQuad {
    pub subject: WireTerm,
    pub predicate: WireTerm,
    pub object: WireTerm,
    pub graph: WireTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StreamRow {
    Options(StreamOptions),
    Entry(LookupEntry),
    Triple(WireTriple),
    Quad(WireQuad),
}

impl StreamRow {
    pub fn is_statement(&self) -> bool {
        matches!(self, StreamRow::Triple(_) | StreamRow::Quad(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct StreamFrame {
    pub rows: Vec<StreamRow>,
}

impl StreamFrame {
    pub fn new(rows: Vec<StreamRow>) -> Self {
        StreamFrame { rows }
    }

    pub fn statement_count(&self) -> usize {
        self.rows.iter().filter(|r| r.is_statement()).count()
    }
}

/// Reply of the stream publishing service.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct StreamAck {
    pub received_rows: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("message truncated")]
    Truncated,
    #[error("varint exceeds 64 bits")]
    VarintOverflow,
    #[error("invalid field number {0}")]
    InvalidFieldNumber(u64),
    #[error("unsupported wire type {0}")]
    UnsupportedWireType(u8),
    #[error("field {field} has unexpected wire type {wire_type}")]
    WrongWireType { field: u32, wire_type: u8 },
    #[error("string is not valid UTF-8")]
    InvalidUtf8,
    #[error("stream row has no variant set")]
    EmptyRow,
    #[error("term has no variant set")]
    EmptyTerm,
    #[error("statement is missing its {0}")]
    MissingTerm(&'static str),
    #[error("unknown physical type {0}")]
    UnknownPhysicalType(u64),
    #[error("quoted triples nested too deeply")]
    RecursionLimit,
}
