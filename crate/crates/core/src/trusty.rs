//! Trusty URIs for RDF content.
//!
//! A trusty URI embeds an artifact code: the module id `RA` followed by the
//! URL-safe, unpadded base64 encoding of a SHA-256 digest computed over a
//! normalized rendering of the nanopublication. While hashing, every
//! position where the code will appear is rendered as a single space.
//!
//! Normalization sorts quads by (graph, subject, predicate, object), IRIs
//! before literals, and renders each term on its own line:
//!
//! ```text
//! <iri>\n
//! ^<datatype> <escaped lexical form>\n
//! @<lowercased language> <escaped lexical form>\n
//! ```
//!
//! where escaping turns `\` into `\\` and newlines into `\n`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::nanopub::{MalformedNanopub, Nanopub};
use crate::rdf::{Literal, Quad, Term};

pub const MODULE_ID: &str = "RA";
pub const CODE_LEN: usize = 45;

/// Stand-in for the artifact code while hashing.
const PLACEHOLDER: &str = " ";
const BLANK_MARK: char = '_';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrustyError {
    #[error("'{0}' is not an artifact code (expected RA followed by 43 base64url characters)")]
    InvalidCode(String),
    #[error("blank node _:{0} must be skolemized before hashing")]
    BlankNode(String),
    #[error("<{0}> already has a trusty URI; use fix to assign a new one")]
    AlreadyTrusty(String),
    #[error("<{0}> has no trusty URI; use mktrusty instead")]
    NotTrusty(String),
    #[error("<{0}>: nothing to fix, the trusty URI is valid")]
    NothingToFix(String),
    #[error("rewritten nanopublication is malformed: {0}")]
    Malformed(#[from] MalformedNanopub),
}

fn is_code_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_'
}

/// A 45-character artifact code, `RA` plus 43 hash characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArtifactCode(String);

impl ArtifactCode {
    pub fn from_digest(digest: &[u8; 32]) -> Self {
        ArtifactCode(format!("{MODULE_ID}{}", URL_SAFE_NO_PAD.encode(digest)))
    }

    pub fn of_bytes(bytes: &[u8]) -> Self {
        Self::from_digest(&Sha256::digest(bytes).into())
    }

    /// Locates the artifact code inside an IRI: the last run of at least 25
    /// code characters, provided it has the shape of an `RA` code.
    pub fn find_in(iri: &str) -> Option<(ArtifactCode, usize)> {
        let mut last: Option<(usize, usize)> = None;
        let mut start: Option<usize> = None;
        for (i, c) in iri.char_indices().chain(std::iter::once((iri.len(), '/'))) {
            match (is_code_char(c) && i < iri.len(), start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    if i - s >= 25 {
                        last = Some((s, i));
                    }
                    start = None;
                }
                _ => {}
            }
        }
        let (s, e) = last?;
        let run = &iri[s..e];
        (run.len() == CODE_LEN && run.starts_with(MODULE_ID)).then(|| (ArtifactCode(run.to_string()), s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn digest(&self) -> [u8; 32] {
        let bytes = URL_SAFE_NO_PAD
            .decode(&self.0[MODULE_ID.len()..])
            .expect("validated at construction");
        bytes.try_into().expect("43 base64 characters encode 32 bytes")
    }
}

impl FromStr for ArtifactCode {
    type Err = TrustyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ok = s.len() == CODE_LEN
            && s.starts_with(MODULE_ID)
            && s.chars().all(is_code_char)
            // the final character carries 2 padding bits that must be zero
            && URL_SAFE_NO_PAD
                .decode(&s[MODULE_ID.len()..])
                .is_ok_and(|b| b.len() == 32);
        if ok {
            Ok(ArtifactCode(s.to_string()))
        } else {
            Err(TrustyError::InvalidCode(s.to_string()))
        }
    }
}

impl fmt::Display for ArtifactCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An IRI split around its artifact code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrustyUri {
    base: String,
    code: ArtifactCode,
    suffix: Option<String>,
}

impl TrustyUri {
    pub fn parse(iri: &str) -> Option<TrustyUri> {
        let (code, at) = ArtifactCode::find_in(iri)?;
        let rest = &iri[at + CODE_LEN..];
        Some(TrustyUri {
            base: iri[..at].to_string(),
            code,
            suffix: (!rest.is_empty()).then(|| rest.to_string()),
        })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn code(&self) -> &ArtifactCode {
        &self.code
    }

    pub fn suffix(&self) -> Option<&str> {
        self.suffix.as_deref()
    }
}

impl fmt::Display for TrustyUri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.base,
            self.code,
            self.suffix.as_deref().unwrap_or("")
        )
    }
}

pub fn is_trusty_uri(iri: &str) -> bool {
    ArtifactCode::find_in(iri).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrustyStatus {
    Valid,
    Invalid,
    NoTrustyUri,
}

fn expand_base(base: &str) -> String {
    let mut s = base.to_string();
    if let Some(i) = s.rfind("ARTIFACTCODE-PLACEHOLDER") {
        let tail = &s[i + "ARTIFACTCODE-PLACEHOLDER".len()..];
        if tail.is_empty() || matches!(tail, "." | "#" | "/") {
            s.truncate(i);
        }
    }
    if s.ends_with(is_code_char) {
        s.push('.');
    }
    s
}

/// Separator between the code and a suffix: `.` when the base already has
/// a fragment, `#` otherwise.
fn post_code_char(base: &str) -> char {
    if base.contains('#') {
        '.'
    } else {
        '#'
    }
}

/// The trusty form of `base` + `suffix` for a given code.
pub fn trusty_uri_string(base: &str, code: &str, suffix: Option<&str>) -> String {
    let mut s = expand_base(base);
    s.push_str(code);
    if let Some(suffix) = suffix {
        let suffix = suffix.replace('#', "%23");
        s.push(post_code_char(base));
        if suffix.starts_with(BLANK_MARK) {
            // doubled so it cannot be mistaken for a skolemized blank node
            s.push(BLANK_MARK);
        }
        s.push_str(&suffix);
    }
    s
}

/// How code-bearing positions are recognised.
#[derive(Clone, Copy)]
enum Family<'a> {
    /// Not yet trusty: the URI and every IRI extending it.
    Prefix { base: &'a str },
    /// Trusty: every occurrence of the embedded code; `base` precedes it.
    Code { code: &'a str, base: &'a str },
}

struct Renamer<'a> {
    family: Family<'a>,
    skolemize: bool,
    blanks: HashMap<String, usize>,
}

impl<'a> Renamer<'a> {
    fn new(family: Family<'a>, skolemize: bool) -> Self {
        Renamer {
            family,
            skolemize,
            blanks: HashMap::new(),
        }
    }

    fn for_uri(uri: &'a str, skolemize: bool) -> Self {
        let family = match TrustyUri::parse(uri) {
            Some(t) => {
                let at = uri.len() - CODE_LEN - t.suffix().map_or(0, str::len);
                Family::Code {
                    code: &uri[at..at + CODE_LEN],
                    base: &uri[..at],
                }
            }
            None => Family::Prefix { base: uri },
        };
        Renamer::new(family, skolemize)
    }

    fn base(&self) -> &'a str {
        match self.family {
            Family::Prefix { base } | Family::Code { base, .. } => base,
        }
    }

    fn term(&mut self, t: &Term, code: &str) -> Result<Term, TrustyError> {
        match t {
            Term::Iri(iri) => Ok(Term::Iri(match self.family {
                Family::Prefix { base } => match iri.strip_prefix(base) {
                    Some(_) if is_trusty_uri(iri) => iri.clone(),
                    Some("") => trusty_uri_string(base, code, None),
                    Some(suffix) => trusty_uri_string(base, code, Some(suffix)),
                    None => iri.clone(),
                },
                Family::Code { code: old, .. } => iri.replace(old, code),
            })),
            Term::Blank(label) if self.skolemize => {
                let next = self.blanks.len() + 1;
                let n = *self.blanks.entry(label.clone()).or_insert(next);
                let base = self.base();
                Ok(Term::Iri(format!(
                    "{}{code}{}{BLANK_MARK}{n}",
                    expand_base(base),
                    post_code_char(base)
                )))
            }
            Term::Blank(label) => Err(TrustyError::BlankNode(label.clone())),
            Term::Literal(_) => Ok(t.clone()),
        }
    }

    fn quads(&mut self, quads: &[Quad], code: &str) -> Result<Vec<Quad>, TrustyError> {
        quads
            .iter()
            .map(|q| {
                Ok(Quad {
                    subject: self.term(&q.subject, code)?,
                    predicate: self.term(&q.predicate, code)?,
                    object: self.term(&q.object, code)?,
                    graph: match &q.graph {
                        Some(g) => Some(self.term(g, code)?),
                        None => None,
                    },
                })
            })
            .collect()
    }
}

fn cmp_literal(a: &Literal, b: &Literal) -> Ordering {
    a.lexical()
        .cmp(b.lexical())
        .then_with(|| a.language().cmp(&b.language()))
        .then_with(|| a.effective_datatype().cmp(&b.effective_datatype()))
}

fn cmp_term(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Iri(x), Term::Iri(y)) => x.cmp(y),
        (Term::Iri(_), _) => Ordering::Less,
        (_, Term::Iri(_)) => Ordering::Greater,
        (Term::Literal(x), Term::Literal(y)) => cmp_literal(x, y),
        (Term::Literal(_), _) => Ordering::Less,
        (_, Term::Literal(_)) => Ordering::Greater,
        (Term::Blank(x), Term::Blank(y)) => x.cmp(y),
    }
}

fn cmp_quad(a: &Quad, b: &Quad) -> Ordering {
    let graph = match (&a.graph, &b.graph) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => cmp_term(x, y),
    };
    graph
        .then_with(|| cmp_term(&a.subject, &b.subject))
        .then_with(|| cmp_term(&a.predicate, &b.predicate))
        .then_with(|| cmp_term(&a.object, &b.object))
}

fn escape(s: &str, out: &mut Vec<u8>) {
    for c in s.chars() {
        match c {
            '\\' => out.extend_from_slice(b"\\\\"),
            '\n' => out.extend_from_slice(b"\\n"),
            c => {
                let mut buf = [0u8; 4];
                out.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
            }
        }
    }
}

fn render_term(t: Option<&Term>, out: &mut Vec<u8>) -> Result<(), TrustyError> {
    match t {
        None => {}
        Some(Term::Iri(iri)) => out.extend_from_slice(iri.as_bytes()),
        Some(Term::Literal(lit)) => {
            match (lit.language(), lit.effective_datatype()) {
                (Some(lang), _) => {
                    out.push(b'@');
                    out.extend_from_slice(lang.to_lowercase().as_bytes());
                }
                (None, Some(dt)) => {
                    out.push(b'^');
                    out.extend_from_slice(dt.as_bytes());
                }
                (None, None) => unreachable!("a literal has a language or a datatype"),
            }
            out.push(b' ');
            escape(lit.lexical(), out);
        }
        Some(Term::Blank(label)) => return Err(TrustyError::BlankNode(label.clone())),
    }
    out.push(b'\n');
    Ok(())
}

/// Canonical byte rendering of quads already in placeholder form.
pub(crate) fn render(mut quads: Vec<Quad>) -> Result<Vec<u8>, TrustyError> {
    quads.sort_by(cmp_quad);
    let mut out = Vec::new();
    for q in &quads {
        render_term(q.graph.as_ref(), &mut out)?;
        render_term(Some(&q.subject), &mut out)?;
        render_term(Some(&q.predicate), &mut out)?;
        render_term(Some(&q.object), &mut out)?;
    }
    Ok(out)
}

/// `quads` with every code-bearing position replaced by the placeholder.
pub(crate) fn placeholder_form(uri: &str, quads: &[Quad], skolemize: bool) -> Result<Vec<Quad>, TrustyError> {
    Renamer::for_uri(uri, skolemize).quads(quads, PLACEHOLDER)
}

/// Deterministic byte sequence that the artifact code is computed over.
///
/// Fails on blank nodes; [`make_trusty`] skolemizes them first.
pub fn normalize(np: &Nanopub) -> Result<Vec<u8>, TrustyError> {
    render(placeholder_form(np.uri(), np.quads(), false)?)
}

/// The code `np` should carry given its current content.
pub fn compute_artifact_code(np: &Nanopub) -> Result<ArtifactCode, TrustyError> {
    Ok(ArtifactCode::of_bytes(&normalize(np)?))
}

/// Verification over a raw quad set, which need not be well-formed.
pub fn verify_quads(uri: &str, quads: &[Quad]) -> TrustyStatus {
    let Some(t) = TrustyUri::parse(uri) else {
        return TrustyStatus::NoTrustyUri;
    };
    match placeholder_form(uri, quads, false).and_then(render) {
        Ok(bytes) if ArtifactCode::of_bytes(&bytes) == *t.code() => TrustyStatus::Valid,
        _ => TrustyStatus::Invalid,
    }
}

pub fn verify_trusty(np: &Nanopub) -> TrustyStatus {
    verify_quads(np.uri(), np.quads())
}

fn mint<'a>(renamer_for: impl Fn() -> Renamer<'a>, quads: &[Quad]) -> Result<Nanopub, TrustyError> {
    let pre = renamer_for().quads(quads, PLACEHOLDER)?;
    let code = ArtifactCode::of_bytes(&render(pre)?);
    let minted = renamer_for().quads(quads, code.as_str())?;
    Ok(Nanopub::new(minted)?)
}

/// Rewrites `np` under a freshly computed trusty URI. Blank nodes are
/// skolemized to IRIs under the new URI in first-occurrence order.
pub fn make_trusty(np: &Nanopub) -> Result<Nanopub, TrustyError> {
    let base = np.uri();
    if is_trusty_uri(base) {
        return Err(TrustyError::AlreadyTrusty(base.to_string()));
    }
    mint(|| Renamer::new(Family::Prefix { base }, true), np.quads())
}

/// Assigns a new trusty URI to a nanopublication whose code no longer
/// matches its content. The input is left untouched.
pub fn fix(np: &Nanopub) -> Result<Nanopub, TrustyError> {
    match verify_trusty(np) {
        TrustyStatus::NoTrustyUri => Err(TrustyError::NotTrusty(np.uri().to_string())),
        TrustyStatus::Valid => Err(TrustyError::NothingToFix(np.uri().to_string())),
        TrustyStatus::Invalid => mint(|| Renamer::for_uri(np.uri(), true), np.quads()),
    }
}
