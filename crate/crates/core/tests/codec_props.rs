mod common;

use std::collections::HashMap;

use common::{arb_stream, Shape};
use jelly_core::codec::{decode_frames, encode_statements, Decoder, Encoder, LookupEvent, LruLookup, Variant};
use jelly_core::model::{GraphName, LiteralKind, Statement, Term};
use jelly_core::proto::{
    encode_frame, PhysicalType, StreamFrame, StreamOptions, StreamRow, TableKind, WireLiteralKind, WireTerm,
};
use proptest::prelude::*;

fn options_for(variant: Variant, shape: Shape) -> StreamOptions {
    let physical = if shape.quads { PhysicalType::Quads } else { PhysicalType::Triples };
    StreamOptions {
        generalized: shape.generalized,
        rdf_star: shape.rdf_star,
        ..variant.options(physical)
    }
}

fn arb_shape() -> impl Strategy<Value = Shape> {
    (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(quads, generalized, rdf_star)| Shape {
        quads,
        generalized,
        rdf_star,
        typed_literals: true,
    })
}

fn encode_rows(stmts: &[Statement], options: StreamOptions, use_repeat: bool) -> Vec<StreamRow> {
    encode_statements(stmts, options, use_repeat, 1)
        .unwrap()
        .into_iter()
        .flat_map(|f| f.rows)
        .collect()
}

/// Brute-force LRU: entries ordered least to most recently used.
struct NaiveLru {
    capacity: usize,
    entries: Vec<(String, u32)>,
    next_id: u32,
}

impl NaiveLru {
    fn get_or_insert(&mut self, v: &str) -> (u32, LookupEvent) {
        if let Some(pos) = self.entries.iter().position(|(e, _)| e == v) {
            let e = self.entries.remove(pos);
            let id = e.1;
            self.entries.push(e);
            return (id, LookupEvent::Hit);
        }
        if self.entries.len() < self.capacity {
            self.next_id += 1;
            self.entries.push((v.to_owned(), self.next_id));
            return (self.next_id, LookupEvent::New);
        }
        let (_, id) = self.entries.remove(0);
        self.entries.push((v.to_owned(), id));
        (id, LookupEvent::Evicted)
    }
}

fn arb_case(max_len: usize) -> impl Strategy<Value = (Shape, Vec<Statement>)> {
    arb_shape().prop_flat_map(move |s| (Just(s), arb_stream(s, max_len)))
}

/// Resolves `wire` against replayed tables and checks it denotes `term`.
fn check_term(
    term: &Term,
    wire: &WireTerm,
    tables: &HashMap<(TableKind, u32), String>,
) -> Result<(), TestCaseError> {
    let get = |table, id: u32| -> Result<&str, TestCaseError> {
        if id == 0 {
            return Ok("");
        }
        tables
            .get(&(table, id))
            .map(String::as_str)
            .ok_or_else(|| TestCaseError::fail(format!("{table} id {id} referenced before its entry")))
    };
    match (term, wire) {
        (_, WireTerm::Repeat) => {}
        (Term::Iri(iri), WireTerm::Iri { prefix_id, name_id }) => {
            let resolved = format!("{}{}", get(TableKind::Prefix, *prefix_id)?, get(TableKind::Name, *name_id)?);
            prop_assert_eq!(&resolved, iri);
        }
        (Term::BlankNode(a), WireTerm::BNode(b)) => prop_assert_eq!(a, b),
        (Term::Literal(lit), WireTerm::Literal(w)) => {
            prop_assert_eq!(&lit.lexical, &w.lexical);
            match (&lit.kind, &w.kind) {
                (LiteralKind::Simple, WireLiteralKind::None) => {}
                (LiteralKind::LangTagged(a), WireLiteralKind::LangTag(b)) => prop_assert_eq!(a, b),
                (LiteralKind::Typed(dt), WireLiteralKind::Datatype(id)) => {
                    prop_assert!(*id != 0);
                    prop_assert_eq!(get(TableKind::Datatype, *id)?, dt.as_str());
                }
                other => prop_assert!(false, "literal kind mismatch {other:?}"),
            }
        }
        (Term::Triple(t), WireTerm::QuotedTriple(w)) => {
            prop_assert!(!matches!(w.subject, WireTerm::Repeat));
            prop_assert!(!matches!(w.predicate, WireTerm::Repeat));
            prop_assert!(!matches!(w.object, WireTerm::Repeat));
            check_term(&t.subject, &w.subject, tables)?;
            check_term(&t.predicate, &w.predicate, tables)?;
            check_term(&t.object, &w.object, tables)?;
        }
        other => prop_assert!(false, "term kind mismatch {other:?}"),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roundtrip_all_variants(
        (shape, stmts) in arb_case(200),
        frame_rows in prop::sample::select(vec![1usize, 3, 10, 1000]),
    ) {
        for variant in Variant::ALL {
            let frames = encode_statements(&stmts, options_for(variant, shape), variant.use_repeat(), frame_rows)
                .unwrap();
            prop_assert_eq!(frames.iter().map(StreamFrame::statement_count).sum::<usize>(), stmts.len());
            prop_assert!(frames.iter().all(|f| f.statement_count() <= frame_rows));
            prop_assert_eq!(&decode_frames(frames).unwrap(), &stmts, "variant {}", variant);
        }
    }

    #[test]
    fn entries_precede_use((shape, stmts) in arb_case(200), variant in prop::sample::select(Variant::ALL.to_vec())) {
        let rows = encode_rows(&stmts, options_for(variant, shape), variant.use_repeat());
        prop_assert!(matches!(rows.first(), Some(StreamRow::Options(_))));
        let mut tables = HashMap::new();
        let mut stmt_iter = stmts.iter();
        for row in &rows[1..] {
            match row {
                StreamRow::Options(_) => prop_assert!(false, "second options row"),
                StreamRow::Entry(e) => {
                    tables.insert((e.table, e.id), e.value.clone());
                }
                StreamRow::Triple(t) => {
                    let s = stmt_iter.next().unwrap();
                    check_term(s.subject(), &t.subject, &tables)?;
                    check_term(s.predicate(), &t.predicate, &tables)?;
                    check_term(s.object(), &t.object, &tables)?;
                }
                StreamRow::Quad(q) => {
                    let s = stmt_iter.next().unwrap();
                    check_term(s.subject(), &q.subject, &tables)?;
                    check_term(s.predicate(), &q.predicate, &tables)?;
                    check_term(s.object(), &q.object, &tables)?;
                    match (s.graph().unwrap(), &q.graph) {
                        (_, WireTerm::Repeat) | (GraphName::DefaultGraph, WireTerm::DefaultGraph) => {}
                        (GraphName::Named(g), w) => check_term(g, w, &tables)?,
                        other => prop_assert!(false, "graph mismatch {other:?}"),
                    }
                }
            }
        }
        prop_assert!(stmt_iter.next().is_none());
    }

    #[test]
    fn repeat_never_grows_output(
        (shape, stmts) in arb_case(300),
        variant in prop::sample::select(vec![Variant::Full, Variant::NoPrefix]),
    ) {
        let opts = options_for(variant, shape);
        let size = |use_repeat| -> usize {
            encode_statements(&stmts, opts.clone(), use_repeat, 100)
                .unwrap()
                .iter()
                .map(|f| encode_frame(f).len())
                .sum()
        };
        prop_assert!(size(true) <= size(false));
    }

    #[test]
    fn decoding_ignores_frame_boundaries(
        (shape, stmts) in arb_case(200),
        cuts in prop::collection::vec(any::<prop::sample::Index>(), 0..20),
    ) {
        let rows = encode_rows(&stmts, options_for(Variant::Full, shape), true);
        let mut points: Vec<usize> = cuts.iter().map(|c| c.index(rows.len() + 1)).collect();
        points.push(0);
        points.push(rows.len());
        points.sort_unstable();
        points.dedup();
        let frames: Vec<StreamFrame> = points.windows(2).map(|w| StreamFrame::new(rows[w[0]..w[1]].to_vec())).collect();
        let one_row_each: Vec<StreamFrame> = rows.iter().map(|r| StreamFrame::new(vec![r.clone()])).collect();
        prop_assert_eq!(&decode_frames(frames).unwrap(), &stmts);
        prop_assert_eq!(&decode_frames(one_row_each).unwrap(), &stmts);
    }

    #[test]
    fn lru_matches_naive_model(
        capacity in 1usize..=8,
        ops in prop::collection::vec(0u8..12, 0..1000),
    ) {
        let mut fast = LruLookup::new(capacity as u32);
        let mut naive = NaiveLru { capacity, entries: Vec::new(), next_id: 0 };
        for op in ops {
            let v = format!("v{op}");
            prop_assert_eq!(fast.get_or_insert(&v), naive.get_or_insert(&v));
            let order: Vec<(String, u32)> =
                fast.recency_order().into_iter().map(|(s, id)| (s.to_owned(), id)).collect();
            prop_assert_eq!(&order, &naive.entries);
        }
    }
}

fn iri(s: &str) -> Term {
    Term::Iri(s.into())
}

#[test]
fn repeat_resolves_across_frames() {
    let s = Statement::triple(iri("http://ex/s"), iri("http://ex/p"), Term::simple_literal("o"));
    let frames = encode_statements([&s, &s], StreamOptions::default(), true, 1).unwrap();
    assert_eq!(frames.len(), 2);
    let StreamRow::Triple(t) = &frames[1].rows[0] else { panic!("expected a triple row") };
    assert!(matches!((&t.subject, &t.predicate, &t.object), (WireTerm::Repeat, WireTerm::Repeat, WireTerm::Repeat)));

    let mut dec = Decoder::new();
    assert_eq!(dec.decode_frame(frames[0].clone()).unwrap(), vec![s.clone()]);
    assert_eq!(dec.decode_frame(frames[1].clone()).unwrap(), vec![s]);
}

#[test]
fn registers_shared_between_triples_and_quads() {
    // a generalized quad stream whose graph repeats while s/p/o change
    let opts = StreamOptions { physical_type: PhysicalType::Quads, ..StreamOptions::default() };
    let g = GraphName::Named(iri("http://ex/g"));
    let stmts = vec![
        Statement::quad(iri("http://ex/a"), iri("http://ex/p"), iri("http://ex/o"), g.clone()),
        Statement::quad(iri("http://ex/b"), iri("http://ex/p"), iri("http://ex/o"), g),
    ];
    let rows = encode_rows(&stmts, opts, true);
    let StreamRow::Quad(q) = rows.last().unwrap() else { panic!("expected a quad row") };
    assert!(matches!(q.subject, WireTerm::Iri { .. }));
    assert!(matches!((&q.predicate, &q.object, &q.graph), (WireTerm::Repeat, WireTerm::Repeat, WireTerm::Repeat)));
}

#[test]
fn name_table_reuse_under_pressure() {
    // 8-entry name table, 50 distinct names cycling: forces constant eviction
    let opts = StreamOptions { max_name_table: 8, max_prefix_table: 2, ..StreamOptions::default() };
    let stmts: Vec<Statement> = (0..500)
        .map(|i| Statement::triple(iri(&format!("http://a/{}", i % 50)), iri("http://b#p"), iri(&format!("urn:x:{}", i % 7))))
        .collect();
    let frames = encode_statements(&stmts, opts, true, 10).unwrap();
    assert_eq!(decode_frames(frames).unwrap(), stmts);
}

#[test]
fn encoder_is_reusable_after_rejection() {
    let mut enc = Encoder::new(StreamOptions::default()).unwrap();
    let mut rows = Vec::new();
    let bad = Statement::triple(Term::simple_literal("x"), iri("http://ex/p"), iri("http://ex/o"));
    assert!(enc.encode_statement(&bad, true, &mut rows).is_err());
    let good = Statement::triple(iri("http://ex/s"), iri("http://ex/p"), iri("http://ex/o"));
    enc.encode_statement(&good, true, &mut rows).unwrap();
    let mut out = Vec::new();
    Decoder::new().decode_rows(rows, &mut out).unwrap();
    assert_eq!(out, vec![good]);
}

#[test]
fn repeat_skips_recency_refresh() {
    // With a table small enough to evict, a Repeat leaves its term's entries
    // un-refreshed, so they can be evicted sooner than in norepeat mode. The
    // size advantage of repeat elision therefore holds only while tables are
    // large relative to the working set.
    let opts = StreamOptions { max_prefix_table: 0, max_name_table: 8, ..StreamOptions::default() };
    let t = |s: &str, p: &str, o: &str| Statement::triple(iri(&format!("urn:x:{s}")), iri(&format!("urn:x:{p}")), iri(&format!("urn:x:{o}")));
    // S2 repeats A and P; S4 evicts one entry: A under repeat (never
    // refreshed since S1), O1 under norepeat. S5 then needs A again.
    let stmts = vec![t("A", "P", "O1"), t("A", "P", "O2"), t("B", "Q", "O3"), t("C", "D", "O3"), t("B", "Q", "A")];
    let entries = |use_repeat| {
        encode_rows(&stmts, opts.clone(), use_repeat)
            .iter()
            .filter(|r| matches!(r, StreamRow::Entry(_)))
            .count()
    };
    assert_eq!(entries(false), 9);
    assert_eq!(entries(true), 10);
    for use_repeat in [true, false] {
        let frames = encode_statements(&stmts, opts.clone(), use_repeat, 2).unwrap();
        assert_eq!(decode_frames(frames).unwrap(), stmts);
    }
}
