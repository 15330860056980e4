use proptest::prelude::*;

use crate::nanopub::{extract_nanopubs, vocab, Nanopub};
use crate::rdf::{Dataset, Format, Literal, Quad, Term, RDF_TYPE, XSD_DATE_TIME};

pub const FIXTURE: &str = include_str!("../tests/fixtures/nanopubfile.trig");

pub fn fixture() -> Vec<Nanopub> {
    extract_nanopubs(Dataset::parse(FIXTURE, Format::TriG).unwrap())
        .into_iter()
        .map(Result::unwrap)
        .collect()
}

fn sub(uri: &str, local: &str) -> String {
    if uri.ends_with('#') || uri.ends_with('/') {
        format!("{uri}{local}")
    } else {
        format!("{uri}#{local}")
    }
}

/// Quads of a minimal well-formed nanopublication plus `extra` assertion
/// triples given as (subject, predicate, object).
pub fn quads_with(uri: &str, extra: &[(Term, Term, Term)]) -> Vec<Quad> {
    let n = Term::iri(uri);
    let [head, a, p, i] = ["Head", "assertion", "provenance", "pubinfo"].map(|l| Term::iri(sub(uri, l)));
    let iri = Term::iri;
    let mut quads = vec![
        Quad::new(
            n.clone(),
            iri(RDF_TYPE),
            iri(vocab::NANOPUBLICATION),
            head.clone(),
        ),
        Quad::new(n.clone(), iri(vocab::HAS_ASSERTION), a.clone(), head.clone()),
        Quad::new(n.clone(), iri(vocab::HAS_PROVENANCE), p.clone(), head.clone()),
        Quad::new(
            n.clone(),
            iri(vocab::HAS_PUBLICATION_INFO),
            i.clone(),
            head.clone(),
        ),
        Quad::new(
            iri("http://example.org/drugA"),
            iri("http://example.org/treats"),
            iri("http://example.org/diseaseB"),
            a.clone(),
        ),
        Quad::new(
            a.clone(),
            iri("http://www.w3.org/ns/prov#wasDerivedFrom"),
            iri("http://example.org/study"),
            p,
        ),
        Quad::new(
            n,
            iri("http://purl.org/dc/terms/created"),
            Term::literal(Literal::typed("2015-08-18T15:36:22+01:00", XSD_DATE_TIME)),
            i,
        ),
    ];
    quads.extend(
        extra
            .iter()
            .map(|(s, p, o)| Quad::new(s.clone(), p.clone(), o.clone(), a.clone())),
    );
    quads
}

pub fn minimal(uri: &str) -> Nanopub {
    Nanopub::new(quads_with(uri, &[])).unwrap()
}

fn extra_term(uri: &'static str) -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z]{1,5}".prop_map(|l| Term::iri(format!("http://other.org/{l}"))),
        "[a-zA-Z_]{1,5}".prop_map(move |l| Term::iri(sub(uri, &l))),
        "[a-c]".prop_map(Term::blank),
        any::<String>().prop_map(|s| Term::literal(Literal::simple(s))),
        ("[ -~\n]{0,6}", "[a-zA-Z]{2}").prop_map(|(s, l)| Term::literal(Literal::lang(s, l))),
        Just(Term::iri(uri)),
    ]
}

fn extra_node(uri: &'static str) -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z]{1,5}".prop_map(|l| Term::iri(format!("http://other.org/{l}"))),
        "[a-zA-Z_]{1,5}".prop_map(move |l| Term::iri(sub(uri, &l))),
        "[a-c]".prop_map(Term::blank),
    ]
}

pub const BASES: [&str; 4] = [
    "http://example.org/np1#",
    "http://example.org/pubs/",
    "http://example.org/pubs/np7",
    "https://w3id.org/np/x",
];

/// Random well-formed nanopublications with optional blank nodes.
pub fn nanopub_strategy() -> impl Strategy<Value = Nanopub> {
    prop::sample::select(BASES.to_vec()).prop_flat_map(|uri| {
        let triple = (
            extra_node(uri),
            "[a-z]{1,4}".prop_map(|l| Term::iri(format!("http://other.org/p/{l}"))),
            extra_term(uri),
        );
        (prop::collection::vec(triple, 0..8), any::<prop::sample::Index>()).prop_map(move |(extra, shift)| {
            let mut quads = quads_with(uri, &extra);
            let k = shift.index(quads.len());
            quads.rotate_left(k);
            Nanopub::new(quads).unwrap()
        })
    })
}
