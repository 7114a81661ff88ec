//! `.nt` / `.nq` / `.jelly` file handling and format conversion.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use jelly_core::codec::{Decoder, FrameEncoder, Variant};
use jelly_core::model::{GraphName, Statement};
use jelly_core::ntriples::{parse_document, write_statement_to};
use jelly_core::proto::{decode_frame, encode_frame, PhysicalType, StreamFrame};
use jelly_core::transport::{read_frame, write_frame, CompressionMode};

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

pub fn is_jelly(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "jelly")
}

pub fn is_nquads(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "nq")
}

/// Adapts a parsed statement to the stream's physical type: on a QUADS
/// stream a triple becomes a default-graph quad; on a TRIPLES stream a quad
/// is an error.
pub fn fit_statement(s: Statement, quads: bool) -> Result<Statement> {
    Ok(match (s, quads) {
        (Statement::Triple(t), true) => Statement::quad(t.subject, t.predicate, t.object, GraphName::DefaultGraph),
        (Statement::Quad(_), false) => bail!("quad in a TRIPLES conversion (use .nq)"),
        (s, _) => s,
    })
}

/// Parses a whole `.nt` / `.nq` file into memory, applying
/// [`fit_statement`] (`.nq` files yield quads only).
pub fn read_statements(path: &Path) -> Result<Vec<Statement>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let quads = is_nquads(path);
    parse_document(BufReader::new(file), false)
        .enumerate()
        .map(|(i, s)| fit_statement(s?, quads).with_context(|| format!("statement {}", i + 1)))
        .collect::<Result<_>>()
        .with_context(|| format!("reading {}", path.display()))
}

/// Reads an N-Triples file as raw text, for producers that parse as they go.
pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Undoes per-frame gzip if the payload carries the gzip magic. A plain
/// frame starts with a field-1 key (0x0A) or is empty, so the check is
/// unambiguous.
pub fn unwrap_payload(payload: &[u8]) -> Result<Vec<u8>> {
    if payload.starts_with(&GZIP_MAGIC) {
        Ok(CompressionMode::GZIP.decompress(payload).context("corrupt gzip frame")?)
    } else {
        Ok(payload.to_vec())
    }
}

/// Reads every frame of a `.jelly` stream.
pub fn read_frames<R: Read>(input: R) -> Result<Vec<StreamFrame>> {
    let mut r = BufReader::new(input);
    let mut frames = Vec::new();
    while let Some(payload) = read_frame(&mut r)? {
        frames.push(decode_frame(&unwrap_payload(&payload)?).with_context(|| format!("frame {}", frames.len()))?);
    }
    Ok(frames)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvertStats {
    pub statements: usize,
    pub frames: usize,
}

/// Streams `.nt`/`.nq` text into delimited frames. `.nq` input produces a
/// QUADS stream in which plain triple lines become default-graph quads; a
/// quad line in `.nt` input is an error.
pub fn nt_to_jelly<R: BufRead, W: Write>(
    input: R,
    quads: bool,
    out: W,
    variant: Variant,
    frame_rows: usize,
    mode: CompressionMode,
) -> Result<ConvertStats> {
    let physical = if quads { PhysicalType::Quads } else { PhysicalType::Triples };
    let mut enc = FrameEncoder::for_variant(variant, physical, frame_rows)?;
    let mut w = BufWriter::new(out);
    let mut stats = ConvertStats { statements: 0, frames: 0 };
    let mut emit = |frame: StreamFrame, stats: &mut ConvertStats| -> Result<()> {
        write_frame(&mut w, &mode.compress(&encode_frame(&frame)))?;
        stats.frames += 1;
        Ok(())
    };
    for (i, s) in parse_document(input, false).enumerate() {
        let s = fit_statement(s?, quads).with_context(|| format!("statement {}", i + 1))?;
        if let Some(frame) = enc.push(&s)? {
            emit(frame, &mut stats)?;
        }
        stats.statements += 1;
    }
    if let Some(frame) = enc.finish() {
        emit(frame, &mut stats)?;
    }
    w.flush()?;
    Ok(stats)
}

/// Decodes a delimited stream back into N-Triples / N-Quads lines.
pub fn jelly_to_nt<R: Read, W: Write>(input: R, out: W) -> Result<ConvertStats> {
    let mut r = BufReader::new(input);
    let mut w = BufWriter::new(out);
    let mut dec = Decoder::new();
    let mut stats = ConvertStats { statements: 0, frames: 0 };
    let mut stmts = Vec::new();
    let mut line = String::new();
    while let Some(payload) = read_frame(&mut r)? {
        let frame = decode_frame(&unwrap_payload(&payload)?).with_context(|| format!("frame {}", stats.frames))?;
        stmts.clear();
        dec.decode_rows(frame.rows, &mut stmts)
            .with_context(|| format!("frame {}", stats.frames))?;
        for s in &stmts {
            line.clear();
            write_statement_to(&mut line, s)?;
            w.write_all(line.as_bytes())?;
        }
        stats.frames += 1;
        stats.statements += stmts.len();
    }
    w.flush()?;
    Ok(stats)
}

/// `convert` subcommand: direction follows the file extensions.
pub fn convert(input: &Path, output: &Path, variant: Variant, frame_rows: usize, gzip: bool) -> Result<ConvertStats> {
    let open = || File::open(input).with_context(|| format!("opening {}", input.display()));
    let create = || File::create(output).with_context(|| format!("creating {}", output.display()));
    match (is_jelly(input), is_jelly(output)) {
        (false, true) => {
            let mode = if gzip { CompressionMode::GZIP } else { CompressionMode::None };
            nt_to_jelly(BufReader::new(open()?), is_nquads(input), create()?, variant, frame_rows, mode)
                .with_context(|| format!("converting {}", input.display()))
        }
        (true, false) => jelly_to_nt(open()?, create()?).with_context(|| format!("converting {}", input.display())),
        _ => bail!("exactly one of input and output must be a .jelly file"),
    }
}
