//! In-memory RDF terms and statements.
//!
//! Terms are plain immutable values. Strict versus generalized RDF is not a
//! property of the types: it is a stream-level flag checked by
//! [`Statement::check`] at encode and parse time.

use std::fmt;

use thiserror::Error;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNodeLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("datatype IRI must not be empty")]
    EmptyDatatype,
    #[error("{position} cannot be {kind} in strict RDF")]
    NotStrict {
        position: Position,
        kind: &'static str,
    },
    #[error("quoted triples are not enabled on this stream")]
    QuotedTripleNotAllowed,
}

/// Statement position, also used to index repeat registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    Subject,
    Predicate,
    Object,
    Graph,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Subject => "subject",
            Position::Predicate => "predicate",
            Position::Object => "object",
            Position::Graph => "graph name",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LiteralKind {
    Simple,
    LangTagged(String),
    Typed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub lexical: String,
    pub kind: LiteralKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    BlankNode(String),
    Literal(Literal),
    Triple(Box<Triple>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphName {
    DefaultGraph,
    Named(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quad {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
    pub graph: GraphName,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Triple(Triple),
    Quad(Quad),
}

/// Language tags follow the N-Triples `LANGTAG` production:
/// `[a-zA-Z]+ ('-' [a-zA-Z0-9]+)*`.
pub fn is_valid_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let Some(primary) = parts.next() else {
        return false;
    };
    if primary.is_empty() || !primary.bytes().all(|b| b.is_ascii_alphabetic()) {
        return false;
    }
    parts.all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_alphanumeric()))
}

/// Builds a literal term. The lexical form is kept exactly as given.
pub fn make_literal(lexical: impl Into<String>, kind: LiteralKind) -> Result<Term, ModelError> {
    match &kind {
        LiteralKind::Simple => {}
        LiteralKind::LangTagged(tag) => {
            if !is_valid_language_tag(tag) {
                return Err(ModelError::InvalidLanguageTag(tag.clone()));
            }
        }
        LiteralKind::Typed(dt) => {
            if dt.is_empty() {
                return Err(ModelError::EmptyDatatype);
            }
        }
    }
    Ok(Term::Literal(Literal {
        lexical: lexical.into(),
        kind,
    }))
}

/// Structural equality of two statements.
pub fn statement_equal(a: &Statement, b: &Statement) -> bool {
    a == b
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Term, ModelError> {
        let value = value.into();
        if value.is_empty() {
            return Err(ModelError::EmptyIri);
        }
        Ok(Term::Iri(value))
    }

    pub fn blank_node(label: impl Into<String>) -> Result<Term, ModelError> {
        let label = label.into();
        if label.is_empty() || label.chars().any(char::is_whitespace) {
            return Err(ModelError::InvalidBlankNodeLabel(label));
        }
        Ok(Term::BlankNode(label))
    }

    pub fn simple_literal(lexical: impl Into<String>) -> Term {
        Term::Literal(Literal {
            lexical: lexical.into(),
            kind: LiteralKind::Simple,
        })
    }

    pub fn quoted(triple: Triple) -> Term {
        Term::Triple(Box::new(triple))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Term::Iri(_) => "an IRI",
            Term::BlankNode(_) => "a blank node",
            Term::Literal(_) => "a literal",
            Term::Triple(_) => "a quoted triple",
        }
    }

    pub fn is_quoted_triple(&self) -> bool {
        matches!(self, Term::Triple(_))
    }
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Triple {
        Triple {
            subject,
            predicate,
            object,
        }
    }

    fn check(&self, generalized: bool, rdf_star: bool) -> Result<(), ModelError> {
        check_term(Position::Subject, &self.subject, generalized, rdf_star)?;
        check_term(Position::Predicate, &self.predicate, generalized, rdf_star)?;
        check_term(Position::Object, &self.object, generalized, rdf_star)
    }
}

fn check_term(
    position: Position,
    term: &Term,
    generalized: bool,
    rdf_star: bool,
) -> Result<(), ModelError> {
    if let Term::Triple(inner) = term {
        if !rdf_star {
            return Err(ModelError::QuotedTripleNotAllowed);
        }
        inner.check(generalized, rdf_star)?;
    }
    if generalized {
        return Ok(());
    }
    let allowed = match position {
        Position::Subject => matches!(term, Term::Iri(_) | Term::BlankNode(_) | Term::Triple(_)),
        Position::Predicate => matches!(term, Term::Iri(_)),
        Position::Object => true,
        Position::Graph => matches!(term, Term::Iri(_) | Term::BlankNode(_)),
    };
    if allowed {
        Ok(())
    } else {
        Err(ModelError::NotStrict {
            position,
            kind: term.kind_name(),
        })
    }
}

impl Quad {
    pub fn new(subject: Term, predicate: Term, object: Term, graph: GraphName) -> Quad {
        Quad {
            subject,
            predicate,
            object,
            graph,
        }
    }
}

impl Statement {
    pub fn triple(subject: Term, predicate: Term, object: Term) -> Statement {
        Statement::Triple(Triple::new(subject, predicate, object))
    }

    pub fn quad(subject: Term, predicate: Term, object: Term, graph: GraphName) -> Statement {
        Statement::Quad(Quad::new(subject, predicate, object, graph))
    }

    pub fn subject(&self) -> &Term {
        match self {
            Statement::Triple(t) => &t.subject,
            Statement::Quad(q) => &q.subject,
        }
    }

    pub fn predicate(&self) -> &Term {
        match self {
            Statement::Triple(t) => &t.predicate,
            Statement::Quad(q) => &q.predicate,
        }
    }

    pub fn object(&self) -> &Term {
        match self {
            Statement::Triple(t) => &t.object,
            Statement::Quad(q) => &q.object,
        }
    }

    pub fn graph(&self) -> Option<&GraphName> {
        match self {
            Statement::Triple(_) => None,
            Statement::Quad(q) => Some(&q.graph),
        }
    }

    pub fn is_quad(&self) -> bool {
        matches!(self, Statement::Quad(_))
    }

    /// Checks the statement against a stream's strictness and RDF-star
    /// settings. Literal graph names are accepted only in generalized mode.
    pub fn check(&self, generalized: bool, rdf_star: bool) -> Result<(), ModelError> {
        check_term(Position::Subject, self.subject(), generalized, rdf_star)?;
        check_term(Position::Predicate, self.predicate(), generalized, rdf_star)?;
        check_term(Position::Object, self.object(), generalized, rdf_star)?;
        if let Some(GraphName::Named(g)) = self.graph() {
            check_term(Position::Graph, g, generalized, rdf_star)?;
        }
        Ok(())
    }

    /// True if any position (at the top level) holds a quoted triple.
    pub fn has_quoted_triple(&self) -> bool {
        self.subject().is_quoted_triple()
            || self.predicate().is_quoted_triple()
            || self.object().is_quoted_triple()
            || matches!(self.graph(), Some(GraphName::Named(g)) if g.is_quoted_triple())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::BlankNode(label) => write!(f, "_:{label}"),
            Term::Literal(Literal { lexical, kind }) => {
                write!(f, "{lexical:?}")?;
                match kind {
                    LiteralKind::Simple => Ok(()),
                    LiteralKind::LangTagged(tag) => write!(f, "@{tag}"),
                    LiteralKind::Typed(dt) => write!(f, "^^<{dt}>"),
                }
            }
            Term::Triple(t) => write!(f, "<< {} {} {} >>", t.subject, t.predicate, t.object),
        }
    }
}
