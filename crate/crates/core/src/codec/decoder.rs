use crate::model::{GraphName, Literal, LiteralKind, Position, Statement, Term, Triple};
use crate::proto::{
    validate_options, LookupEntry, PhysicalType, StreamFrame, StreamOptions, StreamRow, TableKind,
    WireLiteral, WireLiteralKind, WireTerm, WireTriple,
};

use super::DecodeRowError;

/// Id-indexed value array. Slot `i` holds the value most recently assigned to
/// id `i`; the array grows on demand up to the declared maximum.
#[derive(Debug, Clone, Default)]
struct Slots {
    max: u32,
    values: Vec<Option<Box<str>>>,
}

impl Slots {
    fn new(max: u32) -> Self {
        Slots {
            max,
            values: Vec::new(),
        }
    }

    fn set(&mut self, table: TableKind, id: u32, value: String) -> Result<(), DecodeRowError> {
        if id == 0 || id > self.max {
            return Err(DecodeRowError::IdOutOfRange {
                table,
                id,
                max: self.max,
            });
        }
        let idx = id as usize;
        if self.values.len() < idx {
            self.values.resize(idx, None);
        }
        self.values[idx - 1] = Some(value.into_boxed_str());
        Ok(())
    }

    fn get(&self, table: TableKind, id: u32) -> Result<&str, DecodeRowError> {
        match id.checked_sub(1).and_then(|i| self.values.get(i as usize)) {
            Some(Some(v)) => Ok(v),
            _ => Err(DecodeRowError::UnknownId { table, id }),
        }
    }
}

/// Consumer-side stream state.
#[derive(Debug, Clone, Default)]
pub struct Decoder {
    options: Option<StreamOptions>,
    prefixes: Slots,
    names: Slots,
    datatypes: Slots,
    registers: [Option<Term>; 3],
    graph_register: Option<GraphName>,
}

impl Decoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Options announced by the producer, once the header has been read.
    pub fn options(&self) -> Option<&StreamOptions> {
        self.options.as_ref()
    }

    /// Applies one row. Returns the statement for triple and quad rows.
    pub fn push_row(&mut self, row: StreamRow) -> Result<Option<Statement>, DecodeRowError> {
        let Some(options) = &self.options else {
            let StreamRow::Options(opts) = row else {
                return Err(DecodeRowError::MissingOptions);
            };
            validate_options(&opts)?;
            self.prefixes = Slots::new(opts.max_prefix_table);
            self.names = Slots::new(opts.max_name_table);
            self.datatypes = Slots::new(opts.max_datatype_table);
            self.options = Some(opts);
            return Ok(None);
        };
        let (generalized, rdf_star, physical) = (options.generalized, options.rdf_star, options.physical_type);
        match row {
            StreamRow::Options(_) => Err(DecodeRowError::DuplicateOptions),
            StreamRow::Entry(LookupEntry { table, id, value }) => {
                let slots = match table {
                    TableKind::Prefix => &mut self.prefixes,
                    TableKind::Name => &mut self.names,
                    TableKind::Datatype => &mut self.datatypes,
                };
                slots.set(table, id, value)?;
                Ok(None)
            }
            StreamRow::Triple(t) => {
                if physical != PhysicalType::Triples {
                    return Err(DecodeRowError::PhysicalTypeMismatch {
                        expected: physical,
                        found: PhysicalType::Triples,
                    });
                }
                let subject = self.position_term(Position::Subject, t.subject)?;
                let predicate = self.position_term(Position::Predicate, t.predicate)?;
                let object = self.position_term(Position::Object, t.object)?;
                let s = Statement::triple(subject, predicate, object);
                s.check(generalized, rdf_star)?;
                self.set_registers(&s);
                Ok(Some(s))
            }
            StreamRow::Quad(q) => {
                if physical != PhysicalType::Quads {
                    return Err(DecodeRowError::PhysicalTypeMismatch {
                        expected: physical,
                        found: PhysicalType::Quads,
                    });
                }
                let subject = self.position_term(Position::Subject, q.subject)?;
                let predicate = self.position_term(Position::Predicate, q.predicate)?;
                let object = self.position_term(Position::Object, q.object)?;
                let graph = match q.graph {
                    WireTerm::Repeat => self
                        .graph_register
                        .clone()
                        .ok_or(DecodeRowError::RepeatBeforeTerm(Position::Graph))?,
                    WireTerm::DefaultGraph => GraphName::DefaultGraph,
                    other => GraphName::Named(self.term(other)?),
                };
                let s = Statement::quad(subject, predicate, object, graph);
                s.check(generalized, rdf_star)?;
                self.set_registers(&s);
                Ok(Some(s))
            }
        }
    }

    /// Applies rows in order, appending decoded statements to `out`.
    pub fn decode_rows(
        &mut self,
        rows: impl IntoIterator<Item = StreamRow>,
        out: &mut Vec<Statement>,
    ) -> Result<(), DecodeRowError> {
        for row in rows {
            if let Some(s) = self.push_row(row)? {
                out.push(s);
            }
        }
        Ok(())
    }

    pub fn decode_frame(&mut self, frame: StreamFrame) -> Result<Vec<Statement>, DecodeRowError> {
        let mut out = Vec::with_capacity(frame.rows.len());
        self.decode_rows(frame.rows, &mut out)?;
        Ok(out)
    }

    /// Reconstructs an IRI from its prefix and name ids; id 0 contributes an
    /// empty string.
    pub fn resolve_iri(&self, prefix_id: u32, name_id: u32) -> Result<String, DecodeRowError> {
        let prefix = if prefix_id == 0 {
            ""
        } else {
            self.prefixes.get(TableKind::Prefix, prefix_id)?
        };
        let name = if name_id == 0 {
            ""
        } else {
            self.names.get(TableKind::Name, name_id)?
        };
        if prefix.is_empty() && name.is_empty() {
            return Err(DecodeRowError::EmptyIri);
        }
        let mut iri = String::with_capacity(prefix.len() + name.len());
        iri.push_str(prefix);
        iri.push_str(name);
        Ok(iri)
    }

    fn set_registers(&mut self, s: &Statement) {
        // Clone only on change: repeated positions already hold the term.
        for (slot, term) in self.registers.iter_mut().zip([s.subject(), s.predicate(), s.object()]) {
            if slot.as_ref() != Some(term) {
                *slot = Some(term.clone());
            }
        }
        if let Some(g) = s.graph() {
            if self.graph_register.as_ref() != Some(g) {
                self.graph_register = Some(g.clone());
            }
        }
    }

    fn position_term(&self, position: Position, wire: WireTerm) -> Result<Term, DecodeRowError> {
        let idx = match position {
            Position::Subject => 0,
            Position::Predicate => 1,
            Position::Object => 2,
            Position::Graph => unreachable!("graph handled by caller"),
        };
        match wire {
            WireTerm::Repeat => self.registers[idx]
                .clone()
                .ok_or(DecodeRowError::RepeatBeforeTerm(position)),
            other => self.term(other),
        }
    }

    fn term(&self, wire: WireTerm) -> Result<Term, DecodeRowError> {
        Ok(match wire {
            WireTerm::Iri { prefix_id, name_id } => Term::Iri(self.resolve_iri(prefix_id, name_id)?),
            WireTerm::BNode(label) => Term::BlankNode(label),
            WireTerm::Literal(lit) => Term::Literal(self.literal(lit)?),
            WireTerm::QuotedTriple(t) => Term::quoted(self.quoted(*t)?),
            WireTerm::Repeat => return Err(DecodeRowError::RepeatInQuotedTriple),
            WireTerm::DefaultGraph => return Err(DecodeRowError::MisplacedDefaultGraph),
        })
    }

    fn quoted(&self, t: WireTriple) -> Result<Triple, DecodeRowError> {
        Ok(Triple::new(self.term(t.subject)?, self.term(t.predicate)?, self.term(t.object)?))
    }

    fn literal(&self, lit: WireLiteral) -> Result<Literal, DecodeRowError> {
        let kind = match lit.kind {
            WireLiteralKind::None => LiteralKind::Simple,
            WireLiteralKind::LangTag(tag) => {
                if !crate::model::is_valid_language_tag(&tag) {
                    return Err(crate::model::ModelError::InvalidLanguageTag(tag).into());
                }
                LiteralKind::LangTagged(tag)
            }
            WireLiteralKind::Datatype(id) => {
                LiteralKind::Typed(self.datatypes.get(TableKind::Datatype, id)?.to_owned())
            }
        };
        Ok(Literal {
            lexical: lit.lexical,
            kind,
        })
    }
}
