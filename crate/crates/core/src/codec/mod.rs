//! Stateful conversion between statements and stream rows.
//!
//! The [`Encoder`] owns three LRU lookup tables (prefix, name, datatype) and
//! the per-position repeat registers; the [`Decoder`] mirrors them with flat
//! id-indexed arrays. Both are strictly sequential: rows must be fed to the
//! decoder in exactly the order the encoder produced them.

mod decoder;
mod encoder;
mod iri;
mod lru;
mod stream;

use thiserror::Error;

use crate::model::{ModelError, Position};
use crate::proto::{OptionsError, PhysicalType, TableKind};

pub use decoder::Decoder;
pub use encoder::Encoder;
pub use iri::split_iri;
pub use lru::{LookupEvent, LruLookup};
pub use stream::{decode_frames, encode_statements, FrameEncoder, Variant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Options(#[from] OptionsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("stream carries {expected:?} but statement is {found:?}")]
    PhysicalTypeMismatch {
        expected: PhysicalType,
        found: PhysicalType,
    },
    #[error("typed literal on a stream with the datatype table disabled")]
    DatatypeTableDisabled,
    #[error("statement needs more than {capacity} distinct {table} entries")]
    TableOverflow { table: TableKind, capacity: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeRowError {
    #[error("stream does not start with an options row")]
    MissingOptions,
    #[error("options row repeated")]
    DuplicateOptions,
    #[error("invalid stream options: {0}")]
    Options(#[from] OptionsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{table} id {id} exceeds the declared maximum {max}")]
    IdOutOfRange { table: TableKind, id: u32, max: u32 },
    #[error("unknown {table} id {id}")]
    UnknownId { table: TableKind, id: u32 },
    #[error("IRI resolves to the empty string")]
    EmptyIri,
    #[error("repeat before any term in {0} position")]
    RepeatBeforeTerm(Position),
    #[error("repeat inside a quoted triple")]
    RepeatInQuotedTriple,
    #[error("default graph outside the graph position")]
    MisplacedDefaultGraph,
    #[error("stream carries {expected:?} but row is {found:?}")]
    PhysicalTypeMismatch {
        expected: PhysicalType,
        found: PhysicalType,
    },
}
