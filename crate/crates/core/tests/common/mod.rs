#![allow(dead_code)]

pub mod oracle;

use jelly_core::model::{GraphName, Literal, LiteralKind, Statement, Term, Triple};
use proptest::prelude::*;

const PREFIXES: &[&str] = &[
    "http://ex.org/",
    "http://ex.org/vocab#",
    "https://data.example.com/a/b/",
    "urn:x:",
    "http://w3.org/ns#",
];
const DATATYPES: &[&str] = &[
    "http://www.w3.org/2001/XMLSchema#integer",
    "http://www.w3.org/2001/XMLSchema#string",
    "http://www.w3.org/2001/XMLSchema#dateTime",
    "http://ex.org/dt#custom",
];
const LANGS: &[&str] = &["en", "en-US", "de", "zh-Hant-TW"];

/// Which kinds of statement a strategy may produce.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub quads: bool,
    pub generalized: bool,
    pub rdf_star: bool,
    pub typed_literals: bool,
}

impl Shape {
    pub const TRIPLES: Shape = Shape {
        quads: false,
        generalized: false,
        rdf_star: false,
        typed_literals: true,
    };
}

pub fn arb_iri() -> impl Strategy<Value = Term> {
    (prop::sample::select(PREFIXES), "[a-zA-Z0-9_.~-]{0,6}").prop_map(|(p, n)| Term::Iri(format!("{p}{n}")))
}

pub fn arb_bnode() -> impl Strategy<Value = Term> {
    (0..20u32).prop_map(|i| Term::BlankNode(format!("b{i}")))
}

pub fn arb_literal(typed: bool) -> impl Strategy<Value = Term> {
    let lex = prop_oneof![
        3 => "[a-z0-9 ]{0,8}",
        1 => any::<String>(),
        1 => Just("\"quoted\"\n\\back\r".to_owned()),
    ];
    let kind = if typed {
        prop_oneof![
            Just(LiteralKind::Simple),
            prop::sample::select(LANGS).prop_map(|l| LiteralKind::LangTagged(l.into())),
            prop::sample::select(DATATYPES).prop_map(|d| LiteralKind::Typed(d.into())),
        ]
        .boxed()
    } else {
        prop_oneof![
            Just(LiteralKind::Simple),
            prop::sample::select(LANGS).prop_map(|l| LiteralKind::LangTagged(l.into())),
        ]
        .boxed()
    };
    (lex, kind).prop_map(|(lexical, kind)| Term::Literal(Literal { lexical, kind }))
}

/// Any term kind, quoted triples nested up to two deep when `rdf_star`.
pub fn arb_term(shape: Shape) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![arb_iri(), arb_bnode(), arb_literal(shape.typed_literals)].boxed();
    if !shape.rdf_star {
        return leaf;
    }
    leaf.prop_recursive(2, 8, 3, move |inner| {
        (inner.clone(), inner.clone(), inner).prop_map(|(s, p, o)| Term::quoted(Triple::new(s, p, o)))
    })
    .boxed()
}

/// A term valid in `position` under strict RDF (recursing into quoted
/// triples, at most `depth` levels), or any term when generalized.
fn arb_strict(shape: Shape, position: u8, depth: u32) -> BoxedStrategy<Term> {
    if shape.generalized {
        return arb_term(shape);
    }
    let star = shape.rdf_star && depth > 0;
    let quoted = move || {
        (
            arb_strict(shape, 0, depth - 1),
            arb_strict(shape, 1, depth - 1),
            arb_strict(shape, 2, depth - 1),
        )
            .prop_map(|(s, p, o)| Term::quoted(Triple::new(s, p, o)))
    };
    match position {
        0 if star => prop_oneof![4 => arb_iri(), 2 => arb_bnode(), 1 => quoted()].boxed(),
        0 => prop_oneof![arb_iri(), arb_bnode()].boxed(),
        1 => arb_iri().boxed(),
        2 if star => prop_oneof![
            3 => arb_iri(),
            1 => arb_bnode(),
            3 => arb_literal(shape.typed_literals),
            1 => quoted()
        ]
        .boxed(),
        2 => prop_oneof![3 => arb_iri(), 1 => arb_bnode(), 3 => arb_literal(shape.typed_literals)].boxed(),
        _ => prop_oneof![arb_iri(), arb_bnode()].boxed(),
    }
}

pub fn arb_statement(shape: Shape) -> BoxedStrategy<Statement> {
    let spo = (arb_strict(shape, 0, 2), arb_strict(shape, 1, 2), arb_strict(shape, 2, 2));
    if !shape.quads {
        return spo.prop_map(|(s, p, o)| Statement::triple(s, p, o)).boxed();
    }
    let graph = prop_oneof![
        1 => Just(GraphName::DefaultGraph),
        3 => arb_strict(shape, 3, 0).prop_map(GraphName::Named),
    ];
    (spo, graph)
        .prop_map(|((s, p, o), g)| Statement::quad(s, p, o, g))
        .boxed()
}

/// Statement sequences with deliberate runs of repeated terms, so repeat
/// elision and LRU hits are exercised.
pub fn arb_stream(shape: Shape, max_len: usize) -> impl Strategy<Value = Vec<Statement>> {
    prop::collection::vec((arb_statement(shape), 0..4usize), 0..max_len).prop_map(|items| {
        let mut out: Vec<Statement> = Vec::new();
        for (s, mode) in items {
            let s = match (mode, out.last()) {
                // same subject as the previous statement
                (1, Some(prev)) => with_subject(&s, prev.subject().clone()),
                // exact duplicate
                (2, Some(prev)) => prev.clone(),
                _ => s,
            };
            out.push(s);
        }
        out
    })
}

fn with_subject(s: &Statement, subject: Term) -> Statement {
    match s {
        Statement::Triple(t) => Statement::triple(subject, t.predicate.clone(), t.object.clone()),
        Statement::Quad(q) => Statement::quad(subject, q.predicate.clone(), q.object.clone(), q.graph.clone()),
    }
}
