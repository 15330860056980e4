//! Nanopublication indexes: nanopubs whose assertion lists other nanopubs.
//!
//! Large member lists are split into chunks of at most `capacity` elements.
//! Each chunk after the first appends the previous one, so the last chunk
//! (the top index) defines the whole set. Sub-indexes nest whole indexes
//! and do not count toward the capacity.

use std::collections::HashSet;

use chrono::{SecondsFormat, Utc};
use thiserror::Error;

use crate::nanopub::{vocab as np, MalformedNanopub, Nanopub};
use crate::rdf::{Literal, Quad, Term, RDF_TYPE, XSD_DATE_TIME};
use crate::trusty::{self, is_trusty_uri, TrustyError};

pub mod vocab {
    pub const NPX: &str = "http://purl.org/nanopub/x/";
    pub const NANOPUB_INDEX: &str = "http://purl.org/nanopub/x/NanopubIndex";
    pub const INCOMPLETE_INDEX: &str = "http://purl.org/nanopub/x/IncompleteIndex";
    pub const INCLUDES_ELEMENT: &str = "http://purl.org/nanopub/x/includesElement";
    pub const INCLUDES_SUBINDEX: &str = "http://purl.org/nanopub/x/includesSubindex";
    pub const APPENDS_INDEX: &str = "http://purl.org/nanopub/x/appendsIndex";
    pub const DC_TITLE: &str = "http://purl.org/dc/terms/title";
    pub const DC_DESCRIPTION: &str = "http://purl.org/dc/terms/description";
    pub const DC_CREATED: &str = "http://purl.org/dc/terms/created";
    pub const PAV_CREATED_BY: &str = "http://purl.org/pav/createdBy";
    pub const PROV_GENERATED_AT_TIME: &str = "http://www.w3.org/ns/prov#generatedAtTime";
    pub const PROV_WAS_ATTRIBUTED_TO: &str = "http://www.w3.org/ns/prov#wasAttributedTo";
}

pub const DEFAULT_BASE: &str = "http://np.inn.ac/";
pub const DEFAULT_CAPACITY: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("an index needs at least one element or sub-index")]
    Empty,
    #[error("index capacity must be at least 1")]
    ZeroCapacity,
    #[error("<{0}> is not a trusty URI")]
    NotTrusty(String),
    #[error("<{0}> is not an index")]
    NotAnIndex(String),
    #[error("index graph contains a cycle through <{0}>")]
    Cycle(String),
    #[error("cannot resolve index <{uri}>: {reason}")]
    Unresolvable { uri: String, reason: String },
    #[error(transparent)]
    Trusty(#[from] TrustyError),
    #[error(transparent)]
    Malformed(#[from] MalformedNanopub),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMeta {
    /// URI prefix the index URIs are minted under.
    pub base: String,
    pub title: Option<String>,
    pub description: Option<String>,
    pub creators: Vec<String>,
    /// `xsd:dateTime` lexical form; the current time when `None`.
    pub created: Option<String>,
    pub capacity: usize,
}

impl Default for IndexMeta {
    fn default() -> Self {
        IndexMeta {
            base: DEFAULT_BASE.to_string(),
            title: None,
            description: None,
            creators: Vec::new(),
            created: None,
            capacity: DEFAULT_CAPACITY,
        }
    }
}

fn sub(base: &str, local: &str) -> String {
    if base.ends_with('#') || base.ends_with('/') {
        format!("{base}{local}")
    } else {
        format!("{base}#{local}")
    }
}

fn chunk(
    meta: &IndexMeta,
    created: &str,
    elements: &[String],
    subindexes: &[String],
    appends: Option<&str>,
    complete: bool,
) -> Result<Nanopub, IndexError> {
    let iri = |s: &str| Term::iri(s);
    let lit = |s: &str| Term::literal(Literal::simple(s));
    let n = iri(&meta.base);
    let [head, a, p, i] =
        ["Head", "assertion", "provenance", "pubinfo"].map(|l| Term::iri(sub(&meta.base, l)));
    let time = Term::literal(Literal::typed(created, XSD_DATE_TIME));

    let mut quads = vec![
        Quad::new(n.clone(), iri(RDF_TYPE), iri(np::NANOPUBLICATION), head.clone()),
        Quad::new(n.clone(), iri(np::HAS_ASSERTION), a.clone(), head.clone()),
        Quad::new(n.clone(), iri(np::HAS_PROVENANCE), p.clone(), head.clone()),
        Quad::new(n.clone(), iri(np::HAS_PUBLICATION_INFO), i.clone(), head),
    ];
    for e in elements {
        quads.push(Quad::new(
            n.clone(),
            iri(vocab::INCLUDES_ELEMENT),
            iri(e),
            a.clone(),
        ));
    }
    for s in subindexes {
        quads.push(Quad::new(
            n.clone(),
            iri(vocab::INCLUDES_SUBINDEX),
            iri(s),
            a.clone(),
        ));
    }

    quads.push(Quad::new(
        a.clone(),
        iri(vocab::PROV_GENERATED_AT_TIME),
        time.clone(),
        p.clone(),
    ));
    for c in &meta.creators {
        quads.push(Quad::new(
            a.clone(),
            iri(vocab::PROV_WAS_ATTRIBUTED_TO),
            iri(c),
            p.clone(),
        ));
    }

    let info = |pred: &str, o: Term| Quad::new(n.clone(), iri(pred), o, i.clone());
    quads.push(info(RDF_TYPE, iri(vocab::NANOPUB_INDEX)));
    if !complete {
        quads.push(info(RDF_TYPE, iri(vocab::INCOMPLETE_INDEX)));
    }
    if let Some(prev) = appends {
        quads.push(info(vocab::APPENDS_INDEX, iri(prev)));
    }
    if let Some(t) = &meta.title {
        quads.push(info(vocab::DC_TITLE, lit(t)));
    }
    if let Some(d) = &meta.description {
        quads.push(info(vocab::DC_DESCRIPTION, lit(d)));
    }
    for c in &meta.creators {
        quads.push(info(vocab::PAV_CREATED_BY, iri(c)));
    }
    quads.push(info(vocab::DC_CREATED, time));

    Ok(trusty::make_trusty(&Nanopub::new(quads)?)?)
}

/// Builds the index chain for `elements` plus `subindexes`.
///
/// Returns every index nanopub in chain order; the last one is the top
/// index. Sub-indexes are listed in the first chunk.
pub fn make_index(
    elements: &[String],
    subindexes: &[String],
    meta: &IndexMeta,
) -> Result<Vec<Nanopub>, IndexError> {
    if meta.capacity == 0 {
        return Err(IndexError::ZeroCapacity);
    }
    if elements.is_empty() && subindexes.is_empty() {
        return Err(IndexError::Empty);
    }
    if let Some(bad) = elements.iter().chain(subindexes).find(|u| !is_trusty_uri(u)) {
        return Err(IndexError::NotTrusty(bad.clone()));
    }
    let created = meta
        .created
        .clone()
        .unwrap_or_else(|| Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true));

    let chunks: Vec<&[String]> = if elements.is_empty() {
        vec![&[]]
    } else {
        elements.chunks(meta.capacity).collect()
    };
    let mut out: Vec<Nanopub> = Vec::with_capacity(chunks.len());
    for (k, members) in chunks.iter().enumerate() {
        let subs = if k == 0 { subindexes } else { &[] };
        let prev = out.last().map(|np| np.uri().to_string());
        let complete = k + 1 == chunks.len();
        out.push(chunk(meta, &created, members, subs, prev.as_deref(), complete)?);
    }
    Ok(out)
}

/// An index nanopublication read back into its parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NanopubIndex {
    np: Nanopub,
    elements: Vec<String>,
    subindexes: Vec<String>,
    appends: Option<String>,
    title: Option<String>,
    creators: Vec<String>,
    created: Option<String>,
    complete: bool,
}

pub fn is_index(np: &Nanopub) -> bool {
    np.pubinfo().any(|q| {
        q.subject.is_iri_eq(np.uri())
            && q.predicate.is_iri_eq(RDF_TYPE)
            && q.object.is_iri_eq(vocab::NANOPUB_INDEX)
    })
}

impl NanopubIndex {
    pub fn from_nanopub(np: Nanopub) -> Result<NanopubIndex, IndexError> {
        if !is_index(&np) {
            return Err(IndexError::NotAnIndex(np.uri().to_string()));
        }
        let uri = np.uri().to_string();
        let objects = |quads: &mut dyn Iterator<Item = &Quad>, pred: &str| -> Vec<Term> {
            quads
                .filter(|q| q.subject.is_iri_eq(&uri) && q.predicate.is_iri_eq(pred))
                .map(|q| q.object.clone())
                .collect()
        };
        let iris = |terms: Vec<Term>| -> Vec<String> {
            terms
                .into_iter()
                .filter_map(|t| t.as_iri().map(str::to_string))
                .collect()
        };
        let text = |terms: Vec<Term>| -> Option<String> {
            terms.into_iter().find_map(|t| match t {
                Term::Literal(l) => Some(l.lexical().to_string()),
                _ => None,
            })
        };
        let elements = iris(objects(&mut np.assertion(), vocab::INCLUDES_ELEMENT));
        let subindexes = iris(objects(&mut np.assertion(), vocab::INCLUDES_SUBINDEX));
        let appends = iris(objects(&mut np.pubinfo(), vocab::APPENDS_INDEX))
            .into_iter()
            .next();
        let title = text(objects(&mut np.pubinfo(), vocab::DC_TITLE));
        let creators = iris(objects(&mut np.pubinfo(), vocab::PAV_CREATED_BY));
        let created = text(objects(&mut np.pubinfo(), vocab::DC_CREATED));
        let complete = !objects(&mut np.pubinfo(), RDF_TYPE)
            .iter()
            .any(|t| t.is_iri_eq(vocab::INCOMPLETE_INDEX));
        Ok(NanopubIndex {
            np,
            elements,
            subindexes,
            appends,
            title,
            creators,
            created,
            complete,
        })
    }

    pub fn uri(&self) -> &str {
        self.np.uri()
    }

    pub fn as_nanopub(&self) -> &Nanopub {
        &self.np
    }

    pub fn into_nanopub(self) -> Nanopub {
        self.np
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn subindexes(&self) -> &[String] {
        &self.subindexes
    }

    pub fn appended_index(&self) -> Option<&str> {
        self.appends.as_deref()
    }

    pub fn title(&self) -> Option<&str> {
        self.title.as_deref()
    }

    pub fn creators(&self) -> &[String] {
        &self.creators
    }

    pub fn created(&self) -> Option<&str> {
        self.created.as_deref()
    }

    /// False for every chunk of a chain except the top one.
    pub fn is_complete(&self) -> bool {
        self.complete
    }
}

/// Everything reachable from one top index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Resolved {
    /// Element URIs, duplicates removed, oldest chunk first.
    pub elements: Vec<String>,
    /// Every index nanopub visited, including the top one.
    pub indexes: Vec<Nanopub>,
}

struct Resolver<F> {
    fetch: F,
    path: Vec<String>,
    done: HashSet<String>,
    seen: HashSet<String>,
    out: Resolved,
}

impl<F> Resolver<F>
where
    F: FnMut(&str) -> Result<Nanopub, String>,
{
    fn load(&mut self, uri: &str) -> Result<NanopubIndex, IndexError> {
        let np = (self.fetch)(uri).map_err(|reason| IndexError::Unresolvable {
            uri: uri.to_string(),
            reason,
        })?;
        NanopubIndex::from_nanopub(np)
    }

    fn enter(&mut self, uri: &str) -> Result<(), IndexError> {
        if self.path.iter().any(|p| p == uri) {
            return Err(IndexError::Cycle(uri.to_string()));
        }
        self.path.push(uri.to_string());
        Ok(())
    }

    fn visit(&mut self, top: NanopubIndex) -> Result<(), IndexError> {
        let depth = self.path.len();
        self.enter(top.uri())?;
        let mut chain = vec![top];
        while let Some(prev) = chain.last().and_then(|i| i.appended_index()).map(str::to_string) {
            self.enter(&prev)?;
            if self.done.contains(&prev) {
                break;
            }
            chain.push(self.load(&prev)?);
        }
        for index in chain.into_iter().rev() {
            if self.done.contains(index.uri()) {
                continue;
            }
            for e in index.elements() {
                if self.seen.insert(e.clone()) {
                    self.out.elements.push(e.clone());
                }
            }
            for s in index.subindexes() {
                if self.path.iter().any(|p| p == s) {
                    return Err(IndexError::Cycle(s.clone()));
                }
                if !self.done.contains(s) {
                    let child = self.load(s)?;
                    self.visit(child)?;
                }
            }
            self.done.insert(index.uri().to_string());
            self.out.indexes.push(index.into_nanopub());
        }
        self.path.truncate(depth);
        Ok(())
    }
}

/// Walks appends and sub-index links from `top`, fetching referenced index
/// nanopubs through `fetch`.
pub fn resolve<F>(top: NanopubIndex, fetch: F) -> Result<Resolved, IndexError>
where
    F: FnMut(&str) -> Result<Nanopub, String>,
{
    let mut r = Resolver {
        fetch,
        path: Vec::new(),
        done: HashSet::new(),
        seen: HashSet::new(),
        out: Resolved::default(),
    };
    r.visit(top)?;
    Ok(r.out)
}

pub fn resolve_elements<F>(top: NanopubIndex, fetch: F) -> Result<Vec<String>, IndexError>
where
    F: FnMut(&str) -> Result<Nanopub, String>,
{
    resolve(top, fetch).map(|r| r.elements)
}
