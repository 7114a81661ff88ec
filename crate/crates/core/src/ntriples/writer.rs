use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{is_valid_language_tag, GraphName, Literal, LiteralKind, Statement, Term};

use super::{is_absolute_iri, is_valid_bnode_label};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WriteError {
    #[error("unrepresentable in N-Triples: {0}")]
    Unrepresentable(String),
}

/// Renders one statement as a canonical N-Triples / N-Quads line ending in
/// `" .\n"`.
pub fn write_statement(s: &Statement) -> Result<String, WriteError> {
    let mut out = String::with_capacity(128);
    write_statement_to(&mut out, s)?;
    Ok(out)
}

/// Appends the line for `s` to `out`. On error `out` is left unchanged.
pub fn write_statement_to(out: &mut String, s: &Statement) -> Result<(), WriteError> {
    let mark = out.len();
    let result = write_inner(out, s);
    if result.is_err() {
        out.truncate(mark);
    }
    result
}

fn write_inner(out: &mut String, s: &Statement) -> Result<(), WriteError> {
    write_term(out, s.subject())?;
    out.push(' ');
    write_term(out, s.predicate())?;
    out.push(' ');
    write_term(out, s.object())?;
    if let Some(GraphName::Named(g)) = s.graph() {
        out.push(' ');
        write_term(out, g)?;
    }
    out.push_str(" .\n");
    Ok(())
}

fn write_term(out: &mut String, term: &Term) -> Result<(), WriteError> {
    match term {
        Term::Iri(iri) => write_iri(out, iri),
        Term::BlankNode(label) => {
            if !is_valid_bnode_label(label) {
                return Err(WriteError::Unrepresentable(format!("blank node label {label:?}")));
            }
            out.push_str("_:");
            out.push_str(label);
            Ok(())
        }
        Term::Literal(Literal { lexical, kind }) => {
            out.push('"');
            for c in lexical.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    c => out.push(c),
                }
            }
            out.push('"');
            match kind {
                LiteralKind::Simple => Ok(()),
                LiteralKind::LangTagged(tag) => {
                    if !is_valid_language_tag(tag) {
                        return Err(WriteError::Unrepresentable(format!("language tag {tag:?}")));
                    }
                    out.push('@');
                    out.push_str(tag);
                    Ok(())
                }
                LiteralKind::Typed(dt) => {
                    out.push_str("^^");
                    write_iri(out, dt)
                }
            }
        }
        Term::Triple(_) => Err(WriteError::Unrepresentable("quoted triple".into())),
    }
}

fn write_iri(out: &mut String, iri: &str) -> Result<(), WriteError> {
    if !is_absolute_iri(iri) {
        return Err(WriteError::Unrepresentable(format!("relative IRI {iri:?}")));
    }
    out.push('<');
    for c in iri.chars() {
        match c {
            '\u{0}'..='\u{20}' | '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('>');
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Triple;
    use crate::ntriples::parse_statement;

    fn iri(s: &str) -> Term {
        Term::Iri(s.into())
    }

    #[test]
    fn escapes_literal() {
        let s = Statement::triple(iri("http://e/s"), iri("http://e/p"), Term::simple_literal("a\"b\nc"));
        assert_eq!(
            write_statement(&s).unwrap(),
            "<http://e/s> <http://e/p> \"a\\\"b\\nc\" .\n"
        );
    }

    #[test]
    fn writes_quads() {
        let s = Statement::quad(
            iri("http://e/s"),
            iri("http://e/p"),
            Term::BlankNode("o".into()),
            GraphName::Named(iri("http://g")),
        );
        assert_eq!(write_statement(&s).unwrap(), "<http://e/s> <http://e/p> _:o <http://g> .\n");
        let d = Statement::quad(iri("http://e/s"), iri("http://e/p"), iri("http://e/o"), GraphName::DefaultGraph);
        assert_eq!(write_statement(&d).unwrap(), "<http://e/s> <http://e/p> <http://e/o> .\n");
    }

    #[test]
    fn quoted_triple_is_unrepresentable() {
        let inner = Triple::new(iri("http://e/a"), iri("http://e/b"), iri("http://e/c"));
        let s = Statement::triple(Term::quoted(inner), iri("http://e/p"), iri("http://e/o"));
        let mut out = String::from("keep");
        assert!(matches!(write_statement_to(&mut out, &s), Err(WriteError::Unrepresentable(_))));
        assert_eq!(out, "keep");
    }

    #[test]
    fn utf8_passes_through_and_iri_controls_are_escaped() {
        let s = Statement::triple(
            iri("http://e/a b"),
            iri("http://e/p"),
            Term::Literal(Literal {
                lexical: "żółw".into(),
                kind: LiteralKind::LangTagged("pl".into()),
            }),
        );
        let line = write_statement(&s).unwrap();
        assert_eq!(line, "<http://e/a\\u0020b> <http://e/p> \"żółw\"@pl .\n");
        assert_eq!(parse_statement(&line, false).unwrap(), s);
    }
}
