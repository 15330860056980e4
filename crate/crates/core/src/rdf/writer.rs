use std::fmt::{self, Write};

use super::{Dataset, Literal, Quad, RdfError, Term, RDF_TYPE};

fn write_iri_ref<W: Write>(out: &mut W, iri: &str) -> fmt::Result {
    out.write_char('<')?;
    for c in iri.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            write!(out, "\\u{:04X}", c as u32)?;
        } else {
            out.write_char(c)?;
        }
    }
    out.write_char('>')
}

fn write_string<W: Write>(out: &mut W, s: &str) -> fmt::Result {
    out.write_char('"')?;
    for c in s.chars() {
        match c {
            '\\' => out.write_str("\\\\")?,
            '"' => out.write_str("\\\"")?,
            '\n' => out.write_str("\\n")?,
            '\r' => out.write_str("\\r")?,
            c => out.write_char(c)?,
        }
    }
    out.write_char('"')
}

fn write_literal<W: Write>(
    out: &mut W,
    lit: &Literal,
    compact: &dyn Fn(&str) -> Option<String>,
) -> fmt::Result {
    write_string(out, lit.lexical())?;
    if let Some(lang) = lit.language() {
        write!(out, "@{lang}")?;
    } else if let Some(dt) = lit.datatype() {
        out.write_str("^^")?;
        match compact(dt) {
            Some(name) => out.write_str(&name)?,
            None => write_iri_ref(out, dt)?,
        }
    }
    Ok(())
}

pub(super) fn write_nquads_term<W: Write>(out: &mut W, term: &Term) -> fmt::Result {
    match term {
        Term::Iri(iri) => write_iri_ref(out, iri),
        Term::Blank(label) => write!(out, "_:{label}"),
        Term::Literal(lit) => write_literal(out, lit, &|_| None),
    }
}

fn check(quad: &Quad) -> Result<(), RdfError> {
    let reason = if let Some(Term::Blank(_)) | Some(Term::Literal(_)) = &quad.graph {
        Some("graph label must be an IRI")
    } else if matches!(quad.subject, Term::Literal(_)) {
        Some("subject cannot be a literal")
    } else if !quad.predicate.is_iri() {
        Some("predicate must be an IRI")
    } else {
        None
    };
    match reason {
        Some(reason) => Err(RdfError::Unserializable {
            quad: quad.to_string(),
            reason: reason.to_string(),
        }),
        None => Ok(()),
    }
}

pub(super) fn write_nquads(quads: &[Quad]) -> Result<String, RdfError> {
    let mut out = String::new();
    for q in quads {
        check(q)?;
        writeln!(out, "{q}").expect("writing to a String cannot fail");
    }
    Ok(out)
}

fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => return true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        Some(_) => return false,
    }
    !local.ends_with('.') && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn is_simple_prefix(prefix: &str) -> bool {
    let mut chars = prefix.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => {
            !prefix.ends_with('.') && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        }
        Some(_) => false,
    }
}

struct TrigWriter<'a> {
    prefixes: Vec<(&'a str, &'a str)>,
}

impl TrigWriter<'_> {
    fn compact(&self, iri: &str) -> Option<String> {
        self.prefixes
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns) && is_simple_local(&iri[ns.len()..]))
            .max_by_key(|(_, ns)| ns.len())
            .map(|(p, ns)| format!("{p}:{}", &iri[ns.len()..]))
    }

    fn term(&self, out: &mut String, term: &Term) -> fmt::Result {
        match term {
            Term::Iri(iri) => match self.compact(iri) {
                Some(name) => out.write_str(&name),
                None => write_iri_ref(out, iri),
            },
            Term::Blank(label) => write!(out, "_:{label}"),
            Term::Literal(lit) => write_literal(out, lit, &|dt| self.compact(dt)),
        }
    }

    fn predicate(&self, out: &mut String, term: &Term) -> fmt::Result {
        if term.is_iri_eq(RDF_TYPE) {
            out.write_char('a')
        } else {
            self.term(out, term)
        }
    }

    fn document(&self, w: &mut String, quads: &[Quad]) -> fmt::Result {
        for (p, ns) in &self.prefixes {
            write!(w, "@prefix {p}: ")?;
            write_iri_ref(w, ns)?;
            w.push_str(" .\n");
        }
        let mut i = 0;
        while i < quads.len() {
            let graph = &quads[i].graph;
            let mut run = Vec::new();
            while i < quads.len() && &quads[i].graph == graph {
                run.push(&quads[i]);
                i += 1;
            }
            if !w.is_empty() {
                w.push('\n');
            }
            match graph {
                None => self.triples(w, &run, "")?,
                Some(g) => {
                    self.term(w, g)?;
                    w.push_str(" {\n");
                    self.triples(w, &run, "  ")?;
                    w.push_str("}\n");
                }
            }
        }
        Ok(())
    }

    /// Writes consecutive quads sharing a graph, grouping runs of one subject.
    fn triples(&self, out: &mut String, quads: &[&Quad], indent: &str) -> fmt::Result {
        let mut i = 0;
        while i < quads.len() {
            let subject = &quads[i].subject;
            out.write_str(indent)?;
            self.term(out, subject)?;
            out.write_char(' ')?;
            let mut first = true;
            while i < quads.len() && &quads[i].subject == subject {
                if !first {
                    write!(out, " ;\n{indent}    ")?;
                }
                first = false;
                self.predicate(out, &quads[i].predicate)?;
                out.write_char(' ')?;
                self.term(out, &quads[i].object)?;
                i += 1;
            }
            out.write_str(" .\n")?;
        }
        Ok(())
    }
}

pub(super) fn write_trig(ds: &Dataset) -> Result<String, RdfError> {
    for q in ds.quads() {
        check(q)?;
    }
    let writer = TrigWriter {
        prefixes: ds
            .prefixes()
            .iter()
            .filter(|(p, _)| is_simple_prefix(p))
            .map(|(p, ns)| (p.as_str(), ns.as_str()))
            .collect(),
    };
    let mut out = String::new();
    writer
        .document(&mut out, ds.quads())
        .expect("writing to a String cannot fail");
    Ok(out)
}
