//! The nanopublication abstraction.
//!
//! A nanopublication is a URI plus four named graphs: a head graph linking
//! the URI to an assertion graph, a provenance graph and a publication info
//! graph. [`Nanopub::new`] only ever returns values that satisfy the
//! well-formedness rules listed on [`Rule`].

mod aida;
mod check;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::rdf::{Dataset, Quad, Term, RDF_TYPE};

pub use aida::is_aida_sentence;
pub use check::{check, CheckEntry, CheckReport, Classification};

pub mod vocab {
    pub const NP: &str = "http://www.nanopub.org/nschema#";
    pub const NANOPUBLICATION: &str = "http://www.nanopub.org/nschema#Nanopublication";
    pub const HAS_ASSERTION: &str = "http://www.nanopub.org/nschema#hasAssertion";
    pub const HAS_PROVENANCE: &str = "http://www.nanopub.org/nschema#hasProvenance";
    pub const HAS_PUBLICATION_INFO: &str = "http://www.nanopub.org/nschema#hasPublicationInfo";
}

/// Well-formedness rules enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Head holds exactly one `n rdf:type np:Nanopublication`.
    R1,
    /// Head links `n` to exactly one assertion, provenance and pubinfo graph.
    R2,
    /// `n`, head, assertion, provenance and pubinfo are five distinct IRIs.
    R3,
    /// Assertion, provenance and pubinfo graphs are non-empty.
    R4,
    /// Provenance mentions the assertion graph as subject or object.
    R5,
    /// Pubinfo mentions `n` as subject or object.
    R6,
    /// Every quad lives in one of the four graphs.
    R7,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
    /// Graph the problem was found in, when there is one.
    pub graph: Option<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

/// Construction failure; `violations` is never empty.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .violations[0])]
pub struct MalformedNanopub {
    pub uri: Option<String>,
    pub violations: Vec<Violation>,
}

impl MalformedNanopub {
    pub fn first_rule(&self) -> Rule {
        self.violations[0].rule
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("{0}")]
    Malformed(#[from] MalformedNanopub),
    #[error("{count} quad(s) in graph {graph} belong to no nanopublication")]
    Orphan { graph: String, count: usize },
    #[error("graph <{graph}> is claimed by several nanopublications: {}", .heads.join(", "))]
    GraphConflict { graph: String, heads: Vec<String> },
    #[error("expected exactly one nanopublication, found {0}")]
    NotSingle(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nanopub {
    uri: String,
    head: String,
    assertion: String,
    provenance: String,
    pubinfo: String,
    quads: Vec<Quad>,
}

fn violation(rule: Rule, message: impl Into<String>, graph: Option<&str>) -> Violation {
    Violation {
        rule,
        message: message.into(),
        graph: graph.map(str::to_string),
    }
}

fn mentions(q: &Quad, iri: &str) -> bool {
    q.subject.is_iri_eq(iri) || q.object.is_iri_eq(iri)
}

fn in_graph<'a>(quads: &'a [Quad], graph: &'a str) -> impl Iterator<Item = &'a Quad> + 'a {
    quads.iter().filter(move |q| q.graph_iri() == Some(graph))
}

fn is_type_decl(q: &Quad) -> bool {
    q.predicate.is_iri_eq(RDF_TYPE) && q.object.is_iri_eq(vocab::NANOPUBLICATION)
}

impl Nanopub {
    /// Builds a nanopublication from its complete quad set.
    pub fn new(quads: Vec<Quad>) -> Result<Nanopub, MalformedNanopub> {
        let heads: Vec<&Quad> = quads.iter().filter(|q| is_type_decl(q)).collect();
        let Some(decl) = heads.first() else {
            return Err(MalformedNanopub {
                uri: None,
                violations: vec![violation(
                    Rule::R1,
                    "no graph declares a np:Nanopublication",
                    None,
                )],
            });
        };
        let head = match &decl.graph {
            Some(Term::Iri(g)) => g.clone(),
            _ => {
                return Err(MalformedNanopub {
                    uri: None,
                    violations: vec![violation(
                        Rule::R1,
                        "np:Nanopublication is not declared in a named graph",
                        None,
                    )],
                })
            }
        };
        let uri = match &decl.subject {
            Term::Iri(u) => u.clone(),
            _ => {
                return Err(MalformedNanopub {
                    uri: None,
                    violations: vec![violation(
                        Rule::R1,
                        "nanopublication URI must be an IRI",
                        Some(&head),
                    )],
                })
            }
        };
        Self::validate(uri, head, quads)
    }

    fn validate(uri: String, head: String, quads: Vec<Quad>) -> Result<Nanopub, MalformedNanopub> {
        let mut violations = Vec::new();
        let in_head: Vec<&Quad> = quads
            .iter()
            .filter(|q| q.graph_iri() == Some(head.as_str()))
            .collect();

        let decls = in_head.iter().filter(|q| is_type_decl(q)).count();
        if decls != 1 {
            violations.push(violation(
                Rule::R1,
                format!("head declares {decls} np:Nanopublication instances, expected exactly one"),
                Some(&head),
            ));
        }

        let mut link = |pred: &str, name: &str| -> Option<String> {
            let objs: Vec<&Term> = in_head
                .iter()
                .filter(|q| q.subject.is_iri_eq(&uri) && q.predicate.is_iri_eq(pred))
                .map(|q| &q.object)
                .collect();
            match objs.as_slice() {
                [] => {
                    violations.push(violation(Rule::R2, format!("head lacks np:{name}"), Some(&head)));
                    None
                }
                [Term::Iri(g)] => Some(g.clone()),
                [_] => {
                    violations.push(violation(
                        Rule::R3,
                        format!("np:{name} target is not an IRI"),
                        Some(&head),
                    ));
                    None
                }
                _ => {
                    violations.push(violation(
                        Rule::R2,
                        format!("head has {} np:{name} statements", objs.len()),
                        Some(&head),
                    ));
                    None
                }
            }
        };
        let assertion = link(vocab::HAS_ASSERTION, "hasAssertion");
        let provenance = link(vocab::HAS_PROVENANCE, "hasProvenance");
        let pubinfo = link(vocab::HAS_PUBLICATION_INFO, "hasPublicationInfo");

        let (Some(assertion), Some(provenance), Some(pubinfo)) = (assertion, provenance, pubinfo) else {
            return Err(MalformedNanopub {
                uri: Some(uri),
                violations,
            });
        };

        let names = [&uri, &head, &assertion, &provenance, &pubinfo];
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if names[i] == names[j] {
                    violations.push(violation(
                        Rule::R3,
                        format!("<{}> is used for two different roles", names[i]),
                        Some(&head),
                    ));
                }
            }
        }

        for (graph, role) in [
            (&assertion, "assertion"),
            (&provenance, "provenance"),
            (&pubinfo, "pubinfo"),
        ] {
            if in_graph(&quads, graph).next().is_none() {
                violations.push(violation(Rule::R4, format!("{role} graph is empty"), Some(graph)));
            }
        }
        if !in_graph(&quads, &provenance).any(|q| mentions(q, &assertion)) {
            violations.push(violation(
                Rule::R5,
                "provenance graph does not mention the assertion graph",
                Some(&provenance),
            ));
        }
        if !in_graph(&quads, &pubinfo).any(|q| mentions(q, &uri)) {
            violations.push(violation(
                Rule::R6,
                "pubinfo graph does not mention the nanopublication",
                Some(&pubinfo),
            ));
        }
        let stray = quads
            .iter()
            .filter(|q| {
                !matches!(q.graph_iri(), Some(g) if g == head || g == assertion || g == provenance || g == pubinfo)
            })
            .count();
        if stray > 0 {
            violations.push(violation(
                Rule::R7,
                format!("{stray} quad(s) outside the four nanopublication graphs"),
                None,
            ));
        }

        if violations.is_empty() {
            Ok(Nanopub {
                uri,
                head,
                assertion,
                provenance,
                pubinfo,
                quads,
            })
        } else {
            Err(MalformedNanopub {
                uri: Some(uri),
                violations,
            })
        }
    }

    /// Parses a document that must contain exactly one nanopublication.
    pub fn from_dataset(ds: Dataset) -> Result<Nanopub, ExtractError> {
        let mut found = extract_nanopubs(ds);
        match found.len() {
            1 => found.pop().expect("length checked"),
            n => match found.into_iter().find_map(Result::err) {
                Some(e) => Err(e),
                None => Err(ExtractError::NotSingle(n)),
            },
        }
    }

    pub fn uri(&self) -> &str {
        &self.uri
    }

    pub fn head_graph(&self) -> &str {
        &self.head
    }

    pub fn assertion_graph(&self) -> &str {
        &self.assertion
    }

    pub fn provenance_graph(&self) -> &str {
        &self.provenance
    }

    pub fn pubinfo_graph(&self) -> &str {
        &self.pubinfo
    }

    pub fn quads(&self) -> &[Quad] {
        &self.quads
    }

    pub fn into_quads(self) -> Vec<Quad> {
        self.quads
    }

    pub fn graph<'a>(&'a self, graph: &'a str) -> impl Iterator<Item = &'a Quad> + 'a {
        in_graph(&self.quads, graph)
    }

    pub fn assertion(&self) -> impl Iterator<Item = &Quad> {
        self.graph(&self.assertion)
    }

    pub fn provenance(&self) -> impl Iterator<Item = &Quad> {
        self.graph(&self.provenance)
    }

    pub fn pubinfo(&self) -> impl Iterator<Item = &Quad> {
        self.graph(&self.pubinfo)
    }

    /// Quad-multiset equality.
    pub fn same_content(&self, other: &Nanopub) -> bool {
        crate::rdf::same_quad_multiset(&self.quads, &other.quads)
    }

    pub fn to_dataset(&self) -> Dataset {
        Dataset::from_quads(self.quads.clone())
    }
}

/// Splits a dataset into nanopublications by head-graph discovery.
///
/// Results follow the order in which head graphs first appear. Structural
/// problems are reported per nanopublication; trailing entries report quads
/// that no head claims.
pub fn extract_nanopubs(ds: Dataset) -> Vec<Result<Nanopub, ExtractError>> {
    let quads = ds.into_quads();

    // head graph -> nanopub URI, in order of appearance
    let mut heads: Vec<(String, String)> = Vec::new();
    for q in &quads {
        if is_type_decl(q) {
            if let (Some(Term::Iri(g)), Term::Iri(n)) = (&q.graph, &q.subject) {
                if !heads.iter().any(|(h, _)| h == g) {
                    heads.push((g.clone(), n.clone()));
                }
            }
        }
    }

    let mut claims: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (idx, (head, uri)) in heads.iter().enumerate() {
        claims.entry(head.clone()).or_default().push(idx);
        for q in &quads {
            if q.graph_iri() == Some(head.as_str()) && q.subject.is_iri_eq(uri) {
                let structural = q.predicate.is_iri_eq(vocab::HAS_ASSERTION)
                    || q.predicate.is_iri_eq(vocab::HAS_PROVENANCE)
                    || q.predicate.is_iri_eq(vocab::HAS_PUBLICATION_INFO);
                if let (true, Term::Iri(g)) = (structural, &q.object) {
                    let entry = claims.entry(g.clone()).or_default();
                    if !entry.contains(&idx) {
                        entry.push(idx);
                    }
                }
            }
        }
    }

    let mut conflicted: HashMap<usize, ExtractError> = HashMap::new();
    for (graph, owners) in &claims {
        if owners.len() > 1 {
            for &o in owners {
                conflicted
                    .entry(o)
                    .or_insert_with(|| ExtractError::GraphConflict {
                        graph: graph.to_string(),
                        heads: owners.iter().map(|&i| heads[i].1.clone()).collect(),
                    });
            }
        }
    }

    let mut buckets: Vec<Vec<Quad>> = vec![Vec::new(); heads.len()];
    let mut orphans: Vec<(String, usize)> = Vec::new();
    for q in quads {
        let owner = q
            .graph_iri()
            .and_then(|g| claims.get(g))
            .filter(|owners| owners.len() == 1)
            .map(|owners| owners[0]);
        match owner {
            Some(i) => buckets[i].push(q),
            None => {
                let name = match &q.graph {
                    Some(g) => g.to_string(),
                    None => "(default graph)".to_string(),
                };
                let claimed = q.graph_iri().is_some_and(|g| claims.contains_key(g));
                if !claimed {
                    match orphans.iter_mut().find(|(g, _)| *g == name) {
                        Some((_, n)) => *n += 1,
                        None => orphans.push((name, 1)),
                    }
                }
            }
        }
    }

    let mut results: Vec<Result<Nanopub, ExtractError>> = buckets
        .into_iter()
        .enumerate()
        .map(|(i, bucket)| match conflicted.remove(&i) {
            Some(e) => Err(e),
            None => {
                let (head, uri) = heads[i].clone();
                Nanopub::validate(uri, head, bucket).map_err(ExtractError::from)
            }
        })
        .collect();
    results.extend(
        orphans
            .into_iter()
            .map(|(graph, count)| Err(ExtractError::Orphan { graph, count })),
    );
    results
}
