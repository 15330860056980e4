use proptest::prelude::*;

use super::*;

const FIXTURE: &str = include_str!("../../tests/fixtures/nanopubfile.trig");

#[test]
fn fixture_has_24_quads_in_12_graphs() {
    let ds = Dataset::parse(FIXTURE, Format::TriG).unwrap();
    assert_eq!(ds.len(), 24);
    let graphs: std::collections::BTreeSet<_> = ds.quads().iter().filter_map(Quad::graph_iri).collect();
    assert_eq!(graphs.len(), 12);
    assert!(graphs.contains("http://example.org/np2#provenance"));
    let created = &ds.quads()[7];
    assert_eq!(created.subject, Term::iri("http://example.org/np1#"));
    assert_eq!(
        created.object,
        Term::literal(Literal::typed("2015-08-18T15:36:22+01:00", XSD_DATE_TIME))
    );
    // the empty prefix was rebound three times; the last binding wins
    assert_eq!(ds.prefixes()[""], "http://example.org/np3#");
}

#[test]
fn empty_input_is_empty_dataset() {
    assert!(Dataset::parse("", Format::TriG).unwrap().is_empty());
    assert!(Dataset::parse("  # only a comment\n", Format::NQuads)
        .unwrap()
        .is_empty());
    assert_eq!(Dataset::new().serialize(Format::NQuads).unwrap(), "");
}

#[test]
fn default_graph_triples_round_trip() {
    let text = "@prefix ex: <http://example.org/>.\nex:a ex:b ex:c .";
    let ds = Dataset::parse(text, Format::TriG).unwrap();
    assert_eq!(ds.len(), 1);
    assert_eq!(ds.quads()[0].graph, None);
    for f in [Format::TriG, Format::NQuads] {
        let again = Dataset::parse(&ds.serialize(f).unwrap(), f).unwrap();
        assert!(again.same_quads(&ds), "{f}");
    }
}

#[test]
fn fixture_round_trips_through_both_formats() {
    let ds = Dataset::parse(FIXTURE, Format::TriG).unwrap();
    for f in [Format::TriG, Format::NQuads] {
        let text = ds.serialize(f).unwrap();
        let again = Dataset::parse(&text, f).unwrap();
        assert!(again.same_quads(&ds), "{f}:\n{text}");
    }
}

#[test]
fn syntax_errors_carry_position() {
    let err = Dataset::parse("<http://a/> <http://b/> .\n", Format::TriG).unwrap_err();
    match err {
        RdfError::Syntax { line, column, .. } => assert_eq!((line, column), (1, 25)),
        other => panic!("unexpected {other:?}"),
    }
    let err = Dataset::parse("\n\n  <http://a/> <http://b/> \"x .", Format::TriG).unwrap_err();
    assert!(matches!(err, RdfError::Syntax { line: 3, .. }), "{err}");
}

#[test]
fn undefined_prefix_is_reported() {
    let err = Dataset::parse("foo:a foo:b foo:c .", Format::TriG).unwrap_err();
    assert_eq!(
        err,
        RdfError::UndefinedPrefix {
            prefix: "foo".into(),
            line: 1,
            column: 1
        }
    );
}

#[test]
fn relative_iri_needs_base() {
    let err = Dataset::parse("<a> <b> <c> .", Format::TriG).unwrap_err();
    assert!(matches!(err, RdfError::RelativeIri { ref iri, .. } if iri == "a"));
    let err = Dataset::parse("<a> <http://x/b> <http://x/c> .\n", Format::NQuads).unwrap_err();
    assert!(matches!(err, RdfError::RelativeIri { .. }));

    let ds = Dataset::parse("@base <http://x.org/dir/> .\n<a> <#b> <../c> .", Format::TriG).unwrap();
    let q = &ds.quads()[0];
    assert_eq!(q.subject, Term::iri("http://x.org/dir/a"));
    assert_eq!(q.predicate, Term::iri("http://x.org/dir/#b"));
    assert_eq!(q.object, Term::iri("http://x.org/c"));
}

#[test]
fn sparql_style_directives_and_graph_keyword() {
    let text = "PREFIX ex: <http://e/>\nBASE <http://b/>\nGRAPH ex:g { <s> ex:p 1, 2.5, 1e3, true }";
    let ds = Dataset::parse(text, Format::TriG).unwrap();
    let objects: Vec<_> = ds.quads().iter().map(|q| q.object.clone()).collect();
    assert_eq!(
        objects,
        vec![
            Term::literal(Literal::typed("1", XSD_INTEGER)),
            Term::literal(Literal::typed("2.5", XSD_DECIMAL)),
            Term::literal(Literal::typed("1e3", XSD_DOUBLE)),
            Term::literal(Literal::typed("true", XSD_BOOLEAN)),
        ]
    );
    assert!(ds.quads().iter().all(|q| q.graph_iri() == Some("http://e/g")));
}

#[test]
fn strings_and_escapes() {
    let text = r#"@prefix ex: <http://e/>.
ex:g {
  ex:s ex:p "a\"b\\c\ndé", 'single', """long "quoted"
line""", "hi"@en-GB, ex:x\,y .
}"#;
    let ds = Dataset::parse(text, Format::TriG).unwrap();
    let objs: Vec<_> = ds.quads().iter().map(|q| q.object.clone()).collect();
    assert_eq!(objs[0], Term::literal(Literal::simple("a\"b\\c\nd\u{e9}")));
    assert_eq!(objs[1], Term::literal(Literal::simple("single")));
    assert_eq!(objs[2], Term::literal(Literal::simple("long \"quoted\"\nline")));
    assert_eq!(objs[3], Term::literal(Literal::lang("hi", "en-GB")));
    assert_eq!(objs[4], Term::iri("http://e/x,y"));
    let again = Dataset::parse(&ds.serialize(Format::NQuads).unwrap(), Format::NQuads).unwrap();
    assert!(again.same_quads(&ds));
}

#[test]
fn anonymous_nodes_and_collections() {
    let text = "@prefix ex: <http://e/>.\nex:g { ex:s ex:p [ ex:q ex:o ] ; ex:list ( ex:a ex:b ) . }";
    let ds = Dataset::parse(text, Format::TriG).unwrap();
    // p, q, list, 2x(first, rest)
    assert_eq!(ds.len(), 7);
    assert!(ds
        .quads()
        .iter()
        .any(|q| q.predicate.is_iri_eq(RDF_REST) && q.object.is_iri_eq(RDF_NIL)));
    let again = Dataset::parse(&ds.serialize(Format::TriG).unwrap(), Format::TriG).unwrap();
    assert!(again.same_quads(&ds));
}

#[test]
fn minted_blank_labels_avoid_user_labels() {
    let text = "@prefix ex: <http://e/>.\nex:g { _:genid1 ex:p [] . }";
    let ds = Dataset::parse(text, Format::TriG).unwrap();
    let q = &ds.quads()[0];
    assert_eq!(q.subject, Term::blank("genid1"));
    assert_ne!(q.object, Term::blank("genid1"));
    assert!(q.object.is_blank());
}

#[test]
fn blank_labels_are_preserved() {
    let ds = Dataset::parse("_:b0 <http://e/p> _:x.y <http://e/g> .\n", Format::NQuads).unwrap();
    assert_eq!(ds.quads()[0].subject, Term::blank("b0"));
    assert_eq!(ds.quads()[0].object, Term::blank("x.y"));
}

#[test]
fn blank_graph_label_is_unserializable() {
    let ds = Dataset::from_quads(vec![Quad::new(
        Term::iri("http://e/s"),
        Term::iri("http://e/p"),
        Term::iri("http://e/o"),
        Term::blank("g"),
    )]);
    for f in [Format::TriG, Format::NQuads] {
        let err = ds.serialize(f).unwrap_err();
        assert!(
            matches!(err, RdfError::Unserializable { ref quad, .. } if quad.contains("_:g")),
            "{err}"
        );
    }
}

#[test]
fn format_lookup() {
    use std::path::Path;
    assert_eq!(Format::from_extension(Path::new("a/b.trig")), Some(Format::TriG));
    assert_eq!(Format::from_extension(Path::new("x.nq")), Some(Format::NQuads));
    assert_eq!(Format::from_extension(Path::new("x.ttl")), None);
    assert_eq!(
        Format::from_media_type("application/n-quads; charset=utf-8"),
        Some(Format::NQuads)
    );
    assert_eq!("TriG".parse::<Format>(), Ok(Format::TriG));
}

fn iri_strategy() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z]{1,6}".prop_map(|l| Term::iri(format!("http://example.org/{l}"))),
        "[a-zA-Z0-9_]{1,8}".prop_map(|l| Term::iri(format!("http://example.org/ns#{l}"))),
        "[a-z]{1,4}".prop_map(|l| Term::iri(format!("urn:x:{l}"))),
        "[ -~]{0,8}".prop_map(|l| Term::iri(format!("http://odd.example/{l}"))),
    ]
}

fn literal_strategy() -> impl Strategy<Value = Term> {
    prop_oneof![
        any::<String>().prop_map(|s| Term::literal(Literal::simple(s))),
        ("[ -~\n\r\t]{0,12}", "[a-z]{2}(-[A-Z]{2})?").prop_map(|(s, l)| Term::literal(Literal::lang(s, l))),
        ("[0-9]{1,5}", iri_strategy())
            .prop_map(|(s, dt)| Term::literal(Literal::typed(s, dt.as_iri().unwrap().to_string()))),
    ]
}

fn blank_strategy() -> impl Strategy<Value = Term> {
    "[a-z][a-z0-9]{0,4}".prop_map(Term::blank)
}

fn quad_strategy() -> impl Strategy<Value = Quad> {
    (
        prop_oneof![iri_strategy(), blank_strategy()],
        iri_strategy(),
        prop_oneof![iri_strategy(), blank_strategy(), literal_strategy()],
        proptest::option::weighted(0.9, iri_strategy()),
    )
        .prop_map(|(subject, predicate, object, graph)| Quad {
            subject,
            predicate,
            object,
            graph,
        })
}

pub(crate) fn dataset_strategy() -> impl Strategy<Value = Dataset> {
    (
        proptest::collection::vec(quad_strategy(), 0..30),
        proptest::bool::ANY,
    )
        .prop_map(|(quads, with_prefixes)| {
            let mut ds = Dataset::from_quads(quads);
            if with_prefixes {
                ds.set_prefix("ex", "http://example.org/");
                ds.set_prefix("", "http://example.org/ns#");
            }
            ds
        })
}

proptest! {
    #[test]
    fn round_trip_preserves_quad_multiset(ds in dataset_strategy()) {
        for f in [Format::TriG, Format::NQuads] {
            let text = ds.serialize(f).unwrap();
            let again = Dataset::parse(&text, f)
                .unwrap_or_else(|e| panic!("self-rejected {f} output: {e}\n{text}"));
            prop_assert!(again.same_quads(&ds), "{}:\n{}", f, text);
        }
    }

    #[test]
    fn nquads_has_one_line_per_quad(quads in proptest::collection::vec(quad_strategy(), 100)) {
        let text = Dataset::from_quads(quads).serialize(Format::NQuads).unwrap();
        prop_assert_eq!(text.lines().count(), 100);
    }
}
