//! A small RDF quad model with TriG and N-Quads support.
//!
//! The model is deliberately minimal: terms keep their lexical form exactly
//! as written so that content hashes computed over them are reproducible.
//! Blank node labels are preserved as parsed.

mod iri;
mod parser;
mod writer;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use thiserror::Error;

pub use iri::{is_absolute_iri, resolve_iri};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
pub const RDF_REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
pub const RDF_NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undefined prefix '{prefix}:' at line {line}, column {column}")]
    UndefinedPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
    #[error("relative IRI <{iri}> without base at line {line}, column {column}")]
    RelativeIri { iri: String, line: usize, column: usize },
    #[error("cannot serialize quad {quad}: {reason}")]
    Unserializable { quad: String, reason: String },
}

/// A literal value. The lexical form is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Option<String>,
    language: Option<String>,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Some(datatype.into()),
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: Some(language.into()),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    /// Explicit datatype, if one was written.
    pub fn datatype(&self) -> Option<&str> {
        self.datatype.as_deref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// Datatype in the RDF 1.1 sense: simple literals are `xsd:string`.
    /// Language-tagged literals have none here.
    pub fn effective_datatype(&self) -> Option<&str> {
        match (&self.datatype, &self.language) {
            (Some(dt), _) => Some(dt),
            (None, None) => Some(XSD_STRING),
            (None, Some(_)) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Self {
        Term::Iri(value.into())
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::Blank(label.into())
    }

    pub fn literal(lit: Literal) -> Self {
        Term::Literal(lit)
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_iri_eq(&self, iri: &str) -> bool {
        self.as_iri() == Some(iri)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writer::write_nquads_term(f, self)
    }
}

/// One statement. `graph == None` is the default graph; nanopublications
/// always use named graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
    pub graph: Option<Term>,
}

impl Quad {
    pub fn new(subject: Term, predicate: Term, object: Term, graph: Term) -> Self {
        Quad {
            subject,
            predicate,
            object,
            graph: Some(graph),
        }
    }

    pub fn in_default_graph(subject: Term, predicate: Term, object: Term) -> Self {
        Quad {
            subject,
            predicate,
            object,
            graph: None,
        }
    }

    pub fn graph_iri(&self) -> Option<&str> {
        self.graph.as_ref().and_then(Term::as_iri)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .chain(self.graph.as_ref())
    }

    /// Applies `f` to every term position, graph included.
    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Quad {
        Quad {
            subject: f(&self.subject),
            predicate: f(&self.predicate),
            object: f(&self.object),
            graph: self.graph.as_ref().map(f),
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)?;
        if let Some(g) = &self.graph {
            write!(f, " {g}")?;
        }
        f.write_str(" .")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    TriG,
    NQuads,
}

impl Format {
    pub fn from_extension(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "trig" => Some(Format::TriG),
            "nq" | "nquads" => Some(Format::NQuads),
            _ => None,
        }
    }

    pub fn from_media_type(media: &str) -> Option<Format> {
        let essence = media.split(';').next()?.trim().to_ascii_lowercase();
        match essence.as_str() {
            "application/trig" => Some(Format::TriG),
            "application/n-quads" => Some(Format::NQuads),
            _ => None,
        }
    }

    pub fn media_type(self) -> &'static str {
        match self {
            Format::TriG => "application/trig",
            Format::NQuads => "application/n-quads",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::TriG => "trig",
            Format::NQuads => "nq",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "trig" => Ok(Format::TriG),
            "nquads" | "n-quads" | "nq" => Ok(Format::NQuads),
            other => Err(format!("unknown format '{other}' (expected trig or nquads)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::TriG => "trig",
            Format::NQuads => "nquads",
        })
    }
}

/// An ordered quad sequence plus a prefix map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    quads: Vec<Quad>,
    prefixes: IndexMap<String, String>,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_quads(quads: Vec<Quad>) -> Self {
        Dataset {
            quads,
            prefixes: IndexMap::new(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, RdfError> {
        match format {
            Format::TriG => parser::parse_trig(text),
            Format::NQuads => parser::parse_nquads(text),
        }
    }

    pub fn serialize(&self, format: Format) -> Result<String, RdfError> {
        match format {
            Format::TriG => writer::write_trig(self),
            Format::NQuads => writer::write_nquads(&self.quads),
        }
    }

    pub fn quads(&self) -> &[Quad] {
        &self.quads
    }

    pub fn into_quads(self) -> Vec<Quad> {
        self.quads
    }

    pub fn push(&mut self, quad: Quad) {
        self.quads.push(quad);
    }

    pub fn extend(&mut self, quads: impl IntoIterator<Item = Quad>) {
        self.quads.extend(quads);
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn prefixes(&self) -> &IndexMap<String, String> {
        &self.prefixes
    }

    /// Binds `prefix` to `iri`, replacing any earlier binding.
    pub fn set_prefix(&mut self, prefix: impl Into<String>, iri: impl Into<String>) {
        self.prefixes.insert(prefix.into(), iri.into());
    }

    pub fn with_prefixes(mut self, prefixes: &IndexMap<String, String>) -> Self {
        for (p, iri) in prefixes {
            self.set_prefix(p.clone(), iri.clone());
        }
        self
    }

    /// Multiset equality on quads; prefixes and order are ignored.
    pub fn same_quads(&self, other: &Dataset) -> bool {
        same_quad_multiset(&self.quads, &other.quads)
    }
}

pub fn same_quad_multiset(a: &[Quad], b: &[Quad]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut a: Vec<&Quad> = a.iter().collect();
    let mut b: Vec<&Quad> = b.iter().collect();
    a.sort();
    b.sort();
    a == b
}

#[cfg(test)]
mod tests;
