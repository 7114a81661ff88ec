use std::fmt;
use std::str::FromStr;

use crate::model::Statement;
use crate::proto::{PhysicalType, StreamFrame, StreamOptions, StreamRow};

use super::{DecodeRowError, Decoder, EncodeError, Encoder};

/// Named encoder configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Default table sizes (150/4000/32) with repeat elision.
    Full,
    /// Prefix table disabled: IRIs go whole into the name table.
    NoPrefix,
    /// Prefix table disabled and a 256-entry name table.
    NoPrefixSm,
    /// Default tables, but never emits Repeat.
    NoRepeat,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Full, Variant::NoPrefix, Variant::NoPrefixSm, Variant::NoRepeat];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::NoPrefix => "noprefix",
            Variant::NoPrefixSm => "noprefix-sm",
            Variant::NoRepeat => "norepeat",
        }
    }

    pub fn options(self, physical_type: PhysicalType) -> StreamOptions {
        let mut o = StreamOptions {
            physical_type,
            ..StreamOptions::default()
        };
        match self {
            Variant::Full | Variant::NoRepeat => {}
            Variant::NoPrefix => o.max_prefix_table = 0,
            Variant::NoPrefixSm => {
                o.max_prefix_table = 0;
                o.max_name_table = 256;
            }
        }
        o
    }

    pub fn use_repeat(self) -> bool {
        self != Variant::NoRepeat
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.strip_prefix("jelly-").unwrap_or(s);
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown variant {s:?} (expected full, noprefix, noprefix-sm or norepeat)"))
    }
}

/// Packs encoder output into frames of at most `frame_rows` statement rows.
/// Lookup entries travel in the same frame as the statement that needs them.
#[derive(Debug, Clone)]
pub struct FrameEncoder {
    encoder: Encoder,
    use_repeat: bool,
    frame_rows: usize,
    pending: Vec<StreamRow>,
    pending_statements: usize,
    frames: usize,
}

impl FrameEncoder {
    /// # Panics
    /// If `frame_rows` is zero.
    pub fn new(options: StreamOptions, use_repeat: bool, frame_rows: usize) -> Result<Self, EncodeError> {
        assert!(frame_rows > 0, "frame_rows must be positive");
        Ok(FrameEncoder {
            encoder: Encoder::new(options)?,
            use_repeat,
            frame_rows,
            pending: Vec::new(),
            pending_statements: 0,
            frames: 0,
        })
    }

    pub fn for_variant(variant: Variant, physical_type: PhysicalType, frame_rows: usize) -> Result<Self, EncodeError> {
        Self::new(variant.options(physical_type), variant.use_repeat(), frame_rows)
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    /// Encodes one statement; returns a frame once `frame_rows` statements
    /// have accumulated.
    pub fn push(&mut self, s: &Statement) -> Result<Option<StreamFrame>, EncodeError> {
        self.encoder.encode_statement(s, self.use_repeat, &mut self.pending)?;
        self.pending_statements += 1;
        if self.pending_statements >= self.frame_rows {
            return Ok(Some(self.take()));
        }
        Ok(None)
    }

    /// Returns the final, possibly short, frame. A stream with no statements
    /// still yields one frame holding just the options row.
    pub fn finish(mut self) -> Option<StreamFrame> {
        if self.frames == 0 {
            self.encoder.emit_header(&mut self.pending);
        }
        (!self.pending.is_empty()).then(|| self.take())
    }

    fn take(&mut self) -> StreamFrame {
        self.frames += 1;
        self.pending_statements = 0;
        StreamFrame::new(std::mem::take(&mut self.pending))
    }
}

/// Encodes a whole statement sequence into frames.
pub fn encode_statements<'a>(
    statements: impl IntoIterator<Item = &'a Statement>,
    options: StreamOptions,
    use_repeat: bool,
    frame_rows: usize,
) -> Result<Vec<StreamFrame>, EncodeError> {
    let mut enc = FrameEncoder::new(options, use_repeat, frame_rows)?;
    let mut frames = Vec::new();
    for s in statements {
        frames.extend(enc.push(s)?);
    }
    frames.extend(enc.finish());
    Ok(frames)
}

/// Decodes frames of one stream in order.
pub fn decode_frames(frames: impl IntoIterator<Item = StreamFrame>) -> Result<Vec<Statement>, DecodeRowError> {
    let mut dec = Decoder::new();
    let mut out = Vec::new();
    for f in frames {
        dec.decode_rows(f.rows, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Term;

    fn triple(i: usize) -> Statement {
        Statement::triple(
            Term::Iri(format!("http://ex.org/s{}", i % 7)),
            Term::Iri("http://ex.org/p".into()),
            Term::simple_literal(i.to_string()),
        )
    }

    #[test]
    fn variant_names_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>(), Ok(v));
            assert_eq!(format!("jelly-{v}").parse::<Variant>(), Ok(v));
        }
        assert!("bogus".parse::<Variant>().is_err());
    }

    #[test]
    fn variant_options() {
        let t = PhysicalType::Triples;
        assert_eq!(Variant::Full.options(t), StreamOptions::default());
        assert_eq!(Variant::NoRepeat.options(t), StreamOptions::default());
        assert!(!Variant::NoRepeat.use_repeat());
        assert_eq!(Variant::NoPrefix.options(t).max_prefix_table, 0);
        let sm = Variant::NoPrefixSm.options(t);
        assert_eq!((sm.max_prefix_table, sm.max_name_table), (0, 256));
    }

    #[test]
    fn empty_stream_is_one_header_frame() {
        let frames = encode_statements([], StreamOptions::default(), true, 1000).unwrap();
        assert_eq!(frames.len(), 1);
        assert!(matches!(frames[0].rows[..], [StreamRow::Options(_)]));
    }

    #[test]
    fn chunking() {
        let stmts: Vec<_> = (0..2500).map(triple).collect();
        let frames = encode_statements(&stmts, StreamOptions::default(), true, 1000).unwrap();
        let counts: Vec<_> = frames.iter().map(StreamFrame::statement_count).collect();
        assert_eq!(counts, vec![1000, 1000, 500]);
        assert_eq!(decode_frames(frames).unwrap(), stmts);
    }

    #[test]
    fn exact_multiple_has_no_trailing_frame() {
        let stmts: Vec<_> = (0..20).map(triple).collect();
        let frames = encode_statements(&stmts, StreamOptions::default(), true, 10).unwrap();
        assert_eq!(frames.len(), 2);
    }
}
