use crate::model::{GraphName, Literal, LiteralKind, Statement, Term, Triple};
use crate::proto::{
    validate_options, LookupEntry, PhysicalType, StreamOptions, StreamRow, TableKind,
    WireLiteral, WireLiteralKind, WireQuad, WireTerm, WireTriple,
};

use super::iri::split_iri;
use super::lru::{LookupEvent, LruLookup};
use super::EncodeError;

/// Producer-side stream state: three lookup tables, the per-position repeat
/// registers and whether the options header has gone out yet.
#[derive(Debug, Clone)]
pub struct Encoder {
    options: StreamOptions,
    prefixes: Option<LruLookup>,
    names: LruLookup,
    datatypes: Option<LruLookup>,
    registers: [Option<Term>; 3],
    graph_register: Option<GraphName>,
    options_emitted: bool,
    // Ids referenced so far by the statement being encoded, per table.
    in_use: [Vec<u32>; 3],
}

fn table_slot(table: TableKind) -> usize {
    match table {
        TableKind::Prefix => 0,
        TableKind::Name => 1,
        TableKind::Datatype => 2,
    }
}

impl Encoder {
    pub fn new(options: StreamOptions) -> Result<Self, EncodeError> {
        validate_options(&options)?;
        let table = |size: u32| (size > 0).then(|| LruLookup::new(size));
        Ok(Encoder {
            prefixes: table(options.max_prefix_table),
            names: LruLookup::new(options.max_name_table),
            datatypes: table(options.max_datatype_table),
            options,
            registers: [None, None, None],
            graph_register: None,
            options_emitted: false,
            in_use: Default::default(),
        })
    }

    pub fn options(&self) -> &StreamOptions {
        &self.options
    }

    pub fn prefix_table(&self) -> Option<&LruLookup> {
        self.prefixes.as_ref()
    }

    pub fn name_table(&self) -> &LruLookup {
        &self.names
    }

    pub fn datatype_table(&self) -> Option<&LruLookup> {
        self.datatypes.as_ref()
    }

    /// Appends the options row unless it was already emitted.
    pub fn emit_header(&mut self, out: &mut Vec<StreamRow>) {
        if !self.options_emitted {
            out.push(StreamRow::Options(self.options.clone()));
            self.options_emitted = true;
        }
    }

    pub fn header_emitted(&self) -> bool {
        self.options_emitted
    }

    /// Appends the rows for one statement to `out`: the options header on the
    /// first call, then any lookup entries, then the triple or quad row.
    ///
    /// On error no statement row is written and the repeat registers are left
    /// untouched. Entry rows already appended remain valid and must still be
    /// delivered, because the tables have been updated for them.
    pub fn encode_statement(
        &mut self,
        s: &Statement,
        use_repeat: bool,
        out: &mut Vec<StreamRow>,
    ) -> Result<(), EncodeError> {
        let expected = self.options.physical_type;
        let found = if s.is_quad() { PhysicalType::Quads } else { PhysicalType::Triples };
        if expected != found {
            return Err(EncodeError::PhysicalTypeMismatch { expected, found });
        }
        s.check(self.options.generalized, self.options.rdf_star)?;
        if self.datatypes.is_none() && statement_terms(s).any(has_typed_literal) {
            return Err(EncodeError::DatatypeTableDisabled);
        }
        self.emit_header(out);
        for ids in &mut self.in_use {
            ids.clear();
        }

        let terms = [s.subject(), s.predicate(), s.object()];
        let mut wire: [WireTerm; 3] = [WireTerm::Repeat, WireTerm::Repeat, WireTerm::Repeat];
        for (i, term) in terms.iter().enumerate() {
            if !(use_repeat && self.registers[i].as_ref() == Some(*term)) {
                wire[i] = self.encode_term(term, out)?;
            }
        }
        let graph = match s.graph() {
            None => None,
            Some(g) if use_repeat && self.graph_register.as_ref() == Some(g) => Some(WireTerm::Repeat),
            Some(GraphName::DefaultGraph) => Some(WireTerm::DefaultGraph),
            Some(GraphName::Named(t)) => Some(self.encode_term(t, out)?),
        };

        for (i, term) in terms.iter().enumerate() {
            if !matches!(wire[i], WireTerm::Repeat) {
                self.registers[i] = Some((*term).clone());
            }
        }
        let [subject, predicate, object] = wire;
        match graph {
            None => out.push(StreamRow::Triple(WireTriple {
                subject,
                predicate,
                object,
            })),
            Some(graph) => {
                if !matches!(graph, WireTerm::Repeat) {
                    self.graph_register = s.graph().cloned();
                }
                out.push(StreamRow::Quad(WireQuad {
                    subject,
                    predicate,
                    object,
                    graph,
                }));
            }
        }
        Ok(())
    }

    fn encode_term(&mut self, term: &Term, out: &mut Vec<StreamRow>) -> Result<WireTerm, EncodeError> {
        Ok(match term {
            Term::Iri(iri) => self.encode_iri(iri, out)?,
            Term::BlankNode(label) => WireTerm::BNode(label.clone()),
            Term::Literal(lit) => WireTerm::Literal(self.encode_literal(lit, out)?),
            Term::Triple(t) => WireTerm::QuotedTriple(Box::new(self.encode_quoted(t, out)?)),
        })
    }

    fn encode_quoted(&mut self, t: &Triple, out: &mut Vec<StreamRow>) -> Result<WireTriple, EncodeError> {
        Ok(WireTriple {
            subject: self.encode_term(&t.subject, out)?,
            predicate: self.encode_term(&t.predicate, out)?,
            object: self.encode_term(&t.object, out)?,
        })
    }

    fn encode_iri(&mut self, iri: &str, out: &mut Vec<StreamRow>) -> Result<WireTerm, EncodeError> {
        if iri.is_empty() {
            return Err(crate::model::ModelError::EmptyIri.into());
        }
        let (prefix, name) = split_iri(iri, self.prefixes.is_some());
        let prefix_id = if prefix.is_empty() {
            0
        } else {
            let table = self.prefixes.as_mut().expect("prefix table enabled");
            lookup(table, &mut self.in_use, TableKind::Prefix, prefix, out)?
        };
        let name_id = if name.is_empty() {
            0
        } else {
            lookup(&mut self.names, &mut self.in_use, TableKind::Name, name, out)?
        };
        Ok(WireTerm::Iri { prefix_id, name_id })
    }

    fn encode_literal(&mut self, lit: &Literal, out: &mut Vec<StreamRow>) -> Result<WireLiteral, EncodeError> {
        let kind = match &lit.kind {
            LiteralKind::Simple => WireLiteralKind::None,
            LiteralKind::LangTagged(tag) => WireLiteralKind::LangTag(tag.clone()),
            LiteralKind::Typed(dt) => {
                let Some(table) = self.datatypes.as_mut() else {
                    return Err(EncodeError::DatatypeTableDisabled);
                };
                WireLiteralKind::Datatype(lookup(table, &mut self.in_use, TableKind::Datatype, dt, out)?)
            }
        };
        Ok(WireLiteral {
            lexical: lit.lexical.clone(),
            kind,
        })
    }
}

fn statement_terms(s: &Statement) -> impl Iterator<Item = &Term> {
    let graph = match s.graph() {
        Some(GraphName::Named(g)) => Some(g),
        _ => None,
    };
    [s.subject(), s.predicate(), s.object()].into_iter().chain(graph)
}

fn has_typed_literal(term: &Term) -> bool {
    match term {
        Term::Literal(Literal {
            kind: LiteralKind::Typed(_),
            ..
        }) => true,
        Term::Triple(t) => {
            has_typed_literal(&t.subject) || has_typed_literal(&t.predicate) || has_typed_literal(&t.object)
        }
        _ => false,
    }
}

fn lookup(
    table: &mut LruLookup,
    in_use: &mut [Vec<u32>; 3],
    kind: TableKind,
    value: &str,
    out: &mut Vec<StreamRow>,
) -> Result<u32, EncodeError> {
    let (id, event) = table.get_or_insert(value);
    let used = &mut in_use[table_slot(kind)];
    match event {
        LookupEvent::Hit => {}
        LookupEvent::New | LookupEvent::Evicted => {
            // Evicting an id this statement already references would leave the
            // consumer resolving the earlier term against the new value.
            if event == LookupEvent::Evicted && used.contains(&id) {
                return Err(EncodeError::TableOverflow {
                    table: kind,
                    capacity: table.capacity(),
                });
            }
            out.push(StreamRow::Entry(LookupEntry {
                table: kind,
                id,
                value: value.to_owned(),
            }));
        }
    }
    used.push(id);
    Ok(id)
}
