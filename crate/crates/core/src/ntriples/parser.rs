use std::fmt;
use std::io::BufRead;

use crate::model::{GraphName, Literal, LiteralKind, Position, Statement, Term};

use super::{is_absolute_iri, is_pn_chars, is_pn_chars_u};

/// A syntax or strictness error. `line` and `column` are 1-based and point at
/// the first offending byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses one N-Triples or N-Quads statement line.
pub fn parse_statement(line: &str, generalized: bool) -> Result<Statement, ParseError> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut p = LineParser::new(line, 1, generalized);
    match p.parse()? {
        Some(s) => Ok(s),
        None => Err(p.error_at(0, "expected a statement")),
    }
}

/// Streams statements from a document, skipping blank and comment lines.
/// The first error ends the stream.
pub fn parse_document<R: BufRead>(input: R, generalized: bool) -> Reader<R> {
    Reader {
        input,
        generalized,
        buf: Vec::new(),
        line: 0,
        done: false,
    }
}

pub struct Reader<R> {
    input: R,
    generalized: bool,
    buf: Vec<u8>,
    line: usize,
    done: bool,
}

impl<R> Reader<R> {
    /// Number of lines consumed so far.
    pub fn line(&self) -> usize {
        self.line
    }
}

impl<R: BufRead> Iterator for Reader<R> {
    type Item = Result<Statement, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.input.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(ParseError {
                        line: self.line + 1,
                        column: 1,
                        message: format!("read error: {e}"),
                    }));
                }
            }
            self.line += 1;
            let mut bytes = &self.buf[..];
            while let [rest @ .., b'\n' | b'\r'] = bytes {
                bytes = rest;
            }
            let text = match std::str::from_utf8(bytes) {
                Ok(t) => t,
                Err(e) => {
                    self.done = true;
                    return Some(Err(ParseError {
                        line: self.line,
                        column: e.valid_up_to() + 1,
                        message: "invalid UTF-8".into(),
                    }));
                }
            };
            match LineParser::new(text, self.line, self.generalized).parse() {
                Ok(Some(s)) => return Some(Ok(s)),
                Ok(None) => continue,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        None
    }
}

struct LineParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    generalized: bool,
}

impl<'a> LineParser<'a> {
    fn new(src: &'a str, line: usize, generalized: bool) -> Self {
        LineParser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line,
            generalized,
        }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: pos + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_at(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn parse(&mut self) -> Result<Option<Statement>, ParseError> {
        self.skip_ws();
        if matches!(self.peek(), None | Some(b'#')) {
            return Ok(None);
        }
        let subject = self.term(Position::Subject)?;
        self.skip_ws();
        let predicate = self.term(Position::Predicate)?;
        self.skip_ws();
        let object = self.term(Position::Object)?;
        self.skip_ws();
        let graph = match self.peek() {
            Some(b'.') => None,
            None => return Err(self.error_at(self.pos, "missing statement terminator '.'")),
            Some(_) => {
                let g = self.term(Position::Graph)?;
                self.skip_ws();
                Some(g)
            }
        };
        if self.peek() != Some(b'.') {
            return Err(self.error_at(self.pos, "missing statement terminator '.'"));
        }
        self.pos += 1;
        self.skip_ws();
        match self.peek() {
            None | Some(b'#') => {}
            Some(_) => return Err(self.error_at(self.pos, "unexpected content after '.'")),
        }
        Ok(Some(match graph {
            None => Statement::triple(subject, predicate, object),
            Some(g) => Statement::quad(subject, predicate, object, GraphName::Named(g)),
        }))
    }

    fn term(&mut self, position: Position) -> Result<Term, ParseError> {
        let start = self.pos;
        let term = match self.peek() {
            Some(b'<') => Term::Iri(self.iri()?),
            Some(b'_') => self.blank_node()?,
            Some(b'"') => self.literal()?,
            Some(_) => return Err(self.error_at(start, format!("expected {position} term"))),
            None => return Err(self.error_at(start, format!("missing {position}"))),
        };
        if !self.generalized {
            let allowed = match position {
                Position::Subject | Position::Graph => !matches!(term, Term::Literal(_)),
                Position::Predicate => matches!(term, Term::Iri(_)),
                Position::Object => true,
            };
            if !allowed {
                return Err(self.error_at(
                    start,
                    format!("{} not allowed as {position} in strict mode", term.kind_name()),
                ));
            }
        }
        Ok(term)
    }

    fn iri(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.expect(b'<')?;
        let body_start = self.pos;
        let mut out: Option<String> = None;
        loop {
            let Some(b) = self.peek() else {
                return Err(self.error_at(start, "unterminated IRI"));
            };
            match b {
                b'>' => break,
                b'\\' => {
                    let owned = out.get_or_insert_with(|| self.src[body_start..self.pos].to_owned());
                    let esc_start = self.pos;
                    self.pos += 1;
                    let c = match self.peek() {
                        Some(b'u') => self.hex_escape(4, esc_start)?,
                        Some(b'U') => self.hex_escape(8, esc_start)?,
                        _ => return Err(self.error_at(esc_start, "invalid escape in IRI")),
                    };
                    owned.push(c);
                }
                0x00..=0x20 | b'<' | b'"' | b'{' | b'}' | b'|' | b'^' | b'`' => {
                    return Err(self.error_at(self.pos, "invalid character in IRI"));
                }
                _ => {
                    let c = self.next_char();
                    if let Some(owned) = out.as_mut() {
                        owned.push(c);
                    }
                }
            }
        }
        let iri = out.unwrap_or_else(|| self.src[body_start..self.pos].to_owned());
        self.pos += 1;
        if !is_absolute_iri(&iri) {
            return Err(self.error_at(start, "IRI is not absolute"));
        }
        Ok(iri)
    }

    fn next_char(&mut self) -> char {
        let c = self.src[self.pos..].chars().next().expect("position on char boundary");
        self.pos += c.len_utf8();
        c
    }

    /// Reads the hex digits of `\u` / `\U`; `self.pos` is on the `u`.
    fn hex_escape(&mut self, digits: usize, esc_start: usize) -> Result<char, ParseError> {
        self.pos += 1;
        let end = self.pos + digits;
        let hex = self
            .bytes
            .get(self.pos..end)
            .filter(|h| h.iter().all(u8::is_ascii_hexdigit))
            .ok_or_else(|| self.error_at(esc_start, "invalid unicode escape"))?;
        let value = u32::from_str_radix(std::str::from_utf8(hex).unwrap(), 16).unwrap();
        let c = char::from_u32(value)
            .ok_or_else(|| self.error_at(esc_start, "unicode escape is not a scalar value"))?;
        self.pos = end;
        Ok(c)
    }

    fn blank_node(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        if !self.src[self.pos..].starts_with("_:") {
            return Err(self.error_at(start, "expected '_:'"));
        }
        self.pos += 2;
        let label_start = self.pos;
        match self.src[self.pos..].chars().next() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => self.pos += c.len_utf8(),
            _ => return Err(self.error_at(self.pos, "invalid blank node label")),
        }
        while let Some(c) = self.src[self.pos..].chars().next() {
            if is_pn_chars(c) || c == '.' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        // A label cannot end with '.'; trailing dots belong to the terminator.
        while self.bytes[self.pos - 1] == b'.' {
            self.pos -= 1;
        }
        Ok(Term::BlankNode(self.src[label_start..self.pos].to_owned()))
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        self.expect(b'"')?;
        let mut lexical = String::new();
        let mut run = self.pos;
        loop {
            let Some(b) = self.peek() else {
                return Err(self.error_at(start, "unterminated string literal"));
            };
            match b {
                b'"' => break,
                b'\\' => {
                    lexical.push_str(&self.src[run..self.pos]);
                    let esc_start = self.pos;
                    self.pos += 1;
                    let c = match self.peek() {
                        Some(b't') => '\t',
                        Some(b'b') => '\u{8}',
                        Some(b'n') => '\n',
                        Some(b'r') => '\r',
                        Some(b'f') => '\u{c}',
                        Some(b'"') => '"',
                        Some(b'\'') => '\'',
                        Some(b'\\') => '\\',
                        Some(b'u') => {
                            let c = self.hex_escape(4, esc_start)?;
                            lexical.push(c);
                            run = self.pos;
                            continue;
                        }
                        Some(b'U') => {
                            let c = self.hex_escape(8, esc_start)?;
                            lexical.push(c);
                            run = self.pos;
                            continue;
                        }
                        _ => return Err(self.error_at(esc_start, "invalid escape sequence")),
                    };
                    self.pos += 1;
                    lexical.push(c);
                    run = self.pos;
                }
                b'\n' | b'\r' => return Err(self.error_at(self.pos, "line break in string literal")),
                _ => self.pos += 1,
            }
        }
        lexical.push_str(&self.src[run..self.pos]);
        self.pos += 1;
        let kind = match self.peek() {
            Some(b'@') => {
                let tag_start = self.pos;
                self.pos += 1;
                while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'-') {
                    self.pos += 1;
                }
                let tag = &self.src[tag_start + 1..self.pos];
                if !crate::model::is_valid_language_tag(tag) {
                    return Err(self.error_at(tag_start, "invalid language tag"));
                }
                LiteralKind::LangTagged(tag.to_owned())
            }
            Some(b'^') => {
                if !self.src[self.pos..].starts_with("^^") {
                    return Err(self.error_at(self.pos, "expected '^^'"));
                }
                self.pos += 2;
                LiteralKind::Typed(self.iri()?)
            }
            _ => LiteralKind::Simple,
        };
        Ok(Term::Literal(Literal { lexical, kind }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Term {
        Term::Iri(s.into())
    }

    #[test]
    fn parses_iri_triple() {
        let s = parse_statement("<http://e/s> <http://e/p> <http://e/o> .", false).unwrap();
        assert_eq!(s, Statement::triple(iri("http://e/s"), iri("http://e/p"), iri("http://e/o")));
    }

    #[test]
    fn parses_bnode_and_lang_literal() {
        let s = parse_statement("_:b0 <http://e/p> \"x\"@en .", false).unwrap();
        assert_eq!(
            s,
            Statement::triple(
                Term::BlankNode("b0".into()),
                iri("http://e/p"),
                Term::Literal(Literal {
                    lexical: "x".into(),
                    kind: LiteralKind::LangTagged("en".into())
                })
            )
        );
    }

    #[test]
    fn literal_subject_needs_generalized() {
        let line = "\"x\" <http://e/p> <http://e/o> .";
        let err = parse_statement(line, false).unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        assert!(parse_statement(line, true).is_ok());
    }

    #[test]
    fn bnode_predicate_needs_generalized() {
        let line = "<http://e/s> _:p <http://e/o> .";
        let err = parse_statement(line, false).unwrap_err();
        assert_eq!(err.column, 14);
        assert!(parse_statement(line, true).is_ok());
    }

    #[test]
    fn decodes_escapes() {
        let s = parse_statement(
            r#"<http://e/sA> <http://e/p> "a\"b\nc\t\\é\U0001F600" ."#,
            false,
        )
        .unwrap();
        assert_eq!(s.subject(), &iri("http://e/sA"));
        assert_eq!(s.object(), &Term::simple_literal("a\"b\nc\t\\é😀"));
    }

    #[test]
    fn parses_quads_and_typed_literals() {
        let s = parse_statement(
            "<http://e/s> <http://e/p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> <http://g> .",
            false,
        )
        .unwrap();
        let Statement::Quad(q) = s else { panic!("expected quad") };
        assert_eq!(q.graph, GraphName::Named(iri("http://g")));
        assert_eq!(
            q.object,
            Term::Literal(Literal {
                lexical: "5".into(),
                kind: LiteralKind::Typed("http://www.w3.org/2001/XMLSchema#integer".into())
            })
        );
    }

    #[test]
    fn bnode_label_followed_directly_by_dot() {
        let s = parse_statement("<http://e/s> <http://e/p> _:b1.", false).unwrap();
        assert_eq!(s.object(), &Term::BlankNode("b1".into()));
        let s = parse_statement("<http://e/s> <http://e/p> _:a.b .", false).unwrap();
        assert_eq!(s.object(), &Term::BlankNode("a.b".into()));
    }

    #[test]
    fn error_positions() {
        let cases: &[(&str, usize)] = &[
            ("<http://e/s> <http://e/p> <http://e/o>", 39),
            ("<http://e/s> <http://e/p> <http://e/o> . x", 42),
            ("<http://e/s> <http://e/p> \"a\\qb\" .", 29),
            ("<http://e/s> <http://e/p> <http://e/o o> .", 38),
            ("<rel> <http://e/p> <http://e/o> .", 1),
            ("<http://e/s> <http://e/p> \"x\"@1 .", 30),
            ("<http://e/s> <http://e/p> \"x\\u12\" .", 29),
            ("<http://e/s> <http://e/p> \"abc .", 27),
        ];
        for (line, col) in cases {
            let err = parse_statement(line, false).unwrap_err();
            assert_eq!(err.column, *col, "{line}: {err}");
        }
    }

    #[test]
    fn document_skips_comments_and_blank_lines() {
        let doc = "# header\n<http://e/a> <http://e/p> <http://e/o> .\n\n   \n# mid\r\n<http://e/b> <http://e/p> <http://e/o> . # trailing\n<http://e/c> <http://e/p> <http://e/o> .";
        let out: Vec<_> = parse_document(doc.as_bytes(), false).collect::<Result<_, _>>().unwrap();
        let subjects: Vec<_> = out.iter().map(|s| s.subject().clone()).collect();
        assert_eq!(subjects, vec![iri("http://e/a"), iri("http://e/b"), iri("http://e/c")]);
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse_document(&b""[..], false).count(), 0);
    }

    #[test]
    fn document_error_stops_stream() {
        let doc = "<http://e/a> <http://e/p> <http://e/o> .\n<http://e/b> <http://e/p> .\n<http://e/c> <http://e/p> <http://e/o> .\n";
        let items: Vec<_> = parse_document(doc.as_bytes(), false).collect();
        assert_eq!(items.len(), 2);
        let err = items[1].as_ref().unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn invalid_utf8_position() {
        let mut doc = b"<http://e/a> <http://e/p> \"ab".to_vec();
        doc.push(0xFF);
        doc.extend_from_slice(b"\" .\n");
        let err = parse_document(&doc[..], false).next().unwrap().unwrap_err();
        assert_eq!((err.line, err.column), (1, 30));
    }
}
