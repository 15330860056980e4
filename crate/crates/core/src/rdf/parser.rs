use std::collections::HashSet;

use indexmap::IndexMap;

use super::iri::{is_absolute_iri, resolve_iri};
use super::{
    Dataset, Literal, Quad, RdfError, Term, RDF_FIRST, RDF_NIL, RDF_REST, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL,
    XSD_DOUBLE, XSD_INTEGER,
};

// Labels minted for `[]` and collections start with this marker until the
// whole document is read, so they can be renamed away from user labels.
const FRESH_MARK: char = '\u{0}';

pub(super) fn parse_trig(text: &str) -> Result<Dataset, RdfError> {
    let mut p = Parser::new(text, Mode::TriG);
    p.skip_ws();
    while !p.at_eof() {
        p.trig_statement()?;
        p.skip_ws();
    }
    Ok(p.finish())
}

pub(super) fn parse_nquads(text: &str) -> Result<Dataset, RdfError> {
    let mut p = Parser::new(text, Mode::NQuads);
    p.skip_ws();
    while !p.at_eof() {
        p.nquads_statement()?;
        p.skip_ws();
    }
    Ok(p.finish())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    TriG,
    NQuads,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    mode: Mode,
    base: Option<String>,
    prefixes: IndexMap<String, String>,
    quads: Vec<Quad>,
    graph: Option<Term>,
    fresh: usize,
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_ascii_alphabetic() || (!c.is_ascii() && c.is_alphabetic() && !matches!(c, '\u{00D7}' | '\u{00F7}'))
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{00B7}'
        || ('\u{0300}'..='\u{036F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
        || (!c.is_ascii() && c.is_alphanumeric())
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, mode: Mode) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            col: 1,
            mode,
            base: None,
            prefixes: IndexMap::new(),
            quads: Vec::new(),
            graph: None,
            fresh: 0,
        }
    }

    fn finish(self) -> Dataset {
        let mut quads = self.quads;
        if self.fresh > 0 {
            let mut user = HashSet::new();
            for q in &quads {
                for t in q.terms() {
                    if let Term::Blank(l) = t {
                        if !l.starts_with(FRESH_MARK) {
                            user.insert(l.clone());
                        }
                    }
                }
            }
            let mut stem = String::from("genid");
            while user.iter().any(|l| l.starts_with(&stem)) {
                stem.insert(0, 'x');
            }
            let rename = |t: &Term| match t {
                Term::Blank(l) if l.starts_with(FRESH_MARK) => {
                    Term::Blank(format!("{stem}{}", &l[FRESH_MARK.len_utf8()..]))
                }
                other => other.clone(),
            };
            quads = quads.iter().map(|q| q.map_terms(rename)).collect();
        }
        Dataset {
            quads,
            prefixes: self.prefixes,
        }
    }

    // ---- cursor ----

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, RdfError> {
        Err(RdfError::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, RdfError> {
        match self.peek() {
            Some(c) => self.err(format!("expected {expected}, found '{}'", c.escape_debug())),
            None => self.err(format!("expected {expected}, found end of input")),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), RdfError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("'{c}'"))
        }
    }

    /// Case-insensitive keyword followed by something that cannot continue a name.
    fn at_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        if rest.len() < kw.len() || !rest.is_char_boundary(kw.len()) {
            return false;
        }
        if !rest[..kw.len()].eq_ignore_ascii_case(kw) {
            return false;
        }
        match rest[kw.len()..].chars().next() {
            None => true,
            Some(c) => !(is_pn_chars(c) || c == ':' || c == '.'),
        }
    }

    fn fresh_blank(&mut self) -> Term {
        self.fresh += 1;
        Term::Blank(format!("{FRESH_MARK}{}", self.fresh))
    }

    fn emit(&mut self, subject: Term, predicate: Term, object: Term) {
        self.quads.push(Quad {
            subject,
            predicate,
            object,
            graph: self.graph.clone(),
        });
    }

    // ---- TriG grammar ----

    fn trig_statement(&mut self) -> Result<(), RdfError> {
        if self.rest().starts_with("@prefix") {
            self.bump_n("@prefix".len());
            self.prefix_decl()?;
            return self.expect('.');
        }
        if self.rest().starts_with("@base") {
            self.bump_n("@base".len());
            self.base_decl()?;
            return self.expect('.');
        }
        if self.at_keyword("PREFIX") {
            self.bump_n("PREFIX".len());
            return self.prefix_decl();
        }
        if self.at_keyword("BASE") {
            self.bump_n("BASE".len());
            return self.base_decl();
        }
        if self.at_keyword("GRAPH") {
            self.bump_n("GRAPH".len());
            self.skip_ws();
            let label = self.label_or_subject()?;
            return self.wrapped_graph(Some(label));
        }
        match self.peek() {
            Some('{') => self.wrapped_graph(None),
            Some('[') => {
                let (subject, anon) = self.bracket_node()?;
                self.skip_ws();
                if self.peek() == Some('{') {
                    if !anon {
                        return self.err("graph label cannot be a blank node property list");
                    }
                    return self.wrapped_graph(Some(subject));
                }
                if self.peek() != Some('.') {
                    self.predicate_object_list(&subject)?;
                }
                self.expect('.')
            }
            Some('(') => {
                let subject = self.collection()?;
                self.predicate_object_list(&subject)?;
                self.expect('.')
            }
            _ => {
                let subject = self.label_or_subject()?;
                self.skip_ws();
                if self.peek() == Some('{') {
                    self.wrapped_graph(Some(subject))
                } else {
                    self.predicate_object_list(&subject)?;
                    self.expect('.')
                }
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if is_pn_chars(c) || c == '.' {
                prefix.push(c);
                self.bump();
            } else {
                return self.unexpected("prefix name followed by ':'");
            }
        }
        if self.peek() != Some(':') {
            return self.unexpected("':'");
        }
        if prefix.ends_with('.') || prefix.starts_with(|c: char| !is_pn_chars_base(c)) {
            return self.err(format!("invalid prefix name '{prefix}'"));
        }
        self.bump();
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn wrapped_graph(&mut self, label: Option<Term>) -> Result<(), RdfError> {
        if let Some(Term::Literal(_)) = label {
            return self.err("graph label must be an IRI or blank node");
        }
        self.expect('{')?;
        let saved = std::mem::replace(&mut self.graph, label);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    break;
                }
                None => return self.unexpected("'}'"),
                _ => {}
            }
            self.triples()?;
            self.skip_ws();
            match self.peek() {
                Some('.') => {
                    self.bump();
                }
                Some('}') => {}
                _ => return self.unexpected("'.' or '}'"),
            }
        }
        self.graph = saved;
        Ok(())
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        match self.peek() {
            Some('[') => {
                let subject = self.bracket()?;
                self.skip_ws();
                if !matches!(self.peek(), Some('.') | Some('}')) {
                    self.predicate_object_list(&subject)?;
                }
                Ok(())
            }
            Some('(') => {
                let subject = self.collection()?;
                self.predicate_object_list(&subject)
            }
            _ => {
                let subject = self.label_or_subject()?;
                self.predicate_object_list(&subject)
            }
        }
    }

    fn label_or_subject(&mut self) -> Result<Term, RdfError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_nth(1) == Some(':') => self.blank_label(),
            Some('[') => self.bracket(),
            Some(c) if is_pn_chars_base(c) || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            _ => self.unexpected("IRI or blank node"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | Some('}') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Term, RdfError> {
        if self.peek() == Some('a') {
            match self.peek_nth(1) {
                Some(c) if is_pn_chars(c) || c == ':' || c == '.' => {}
                _ => {
                    self.bump();
                    return Ok(Term::iri(RDF_TYPE));
                }
            }
        }
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some(c) if is_pn_chars_base(c) || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            _ => self.unexpected("predicate"),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Term) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            let object = self.object()?;
            self.emit(subject.clone(), predicate.clone(), object);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_nth(1) == Some(':') => self.blank_label(),
            Some('[') => self.bracket(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.number(),
            _ if self.at_keyword("true") => {
                self.bump_n(4);
                Ok(Term::Literal(Literal::typed("true", XSD_BOOLEAN)))
            }
            _ if self.at_keyword("false") => {
                self.bump_n(5);
                Ok(Term::Literal(Literal::typed("false", XSD_BOOLEAN)))
            }
            Some(c) if is_pn_chars_base(c) || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            _ => self.unexpected("object"),
        }
    }

    fn bracket(&mut self) -> Result<Term, RdfError> {
        Ok(self.bracket_node()?.0)
    }

    /// `[]` or `[ predicateObjectList ]`; the flag is true for `[]`.
    fn bracket_node(&mut self) -> Result<(Term, bool), RdfError> {
        self.expect('[')?;
        let node = self.fresh_blank();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok((node, true));
        }
        self.predicate_object_list(&node)?;
        self.expect(']')?;
        Ok((node, false))
    }

    fn collection(&mut self) -> Result<Term, RdfError> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(')') {
                self.bump();
                break;
            }
            if self.at_eof() {
                return self.unexpected("')'");
            }
            items.push(self.object()?);
        }
        if items.is_empty() {
            return Ok(Term::iri(RDF_NIL));
        }
        let nodes: Vec<Term> = items.iter().map(|_| self.fresh_blank()).collect();
        for (i, item) in items.into_iter().enumerate() {
            self.emit(nodes[i].clone(), Term::iri(RDF_FIRST), item);
            let rest = nodes.get(i + 1).cloned().unwrap_or_else(|| Term::iri(RDF_NIL));
            self.emit(nodes[i].clone(), Term::iri(RDF_REST), rest);
        }
        Ok(nodes[0].clone())
    }

    // ---- N-Quads grammar ----

    fn nquads_statement(&mut self) -> Result<(), RdfError> {
        let subject = match self.peek() {
            Some('<') => Term::Iri(self.iri_ref()?),
            Some('_') => self.blank_label()?,
            _ => return self.unexpected("subject IRI or blank node"),
        };
        self.skip_inline_ws();
        let predicate = match self.peek() {
            Some('<') => Term::Iri(self.iri_ref()?),
            _ => return self.unexpected("predicate IRI"),
        };
        self.skip_inline_ws();
        let object = match self.peek() {
            Some('<') => Term::Iri(self.iri_ref()?),
            Some('_') => self.blank_label()?,
            Some('"') => self.literal()?,
            _ => return self.unexpected("object"),
        };
        self.skip_inline_ws();
        let graph = match self.peek() {
            Some('<') => Some(Term::Iri(self.iri_ref()?)),
            Some('_') => Some(self.blank_label()?),
            _ => None,
        };
        self.skip_inline_ws();
        if self.peek() != Some('.') {
            return self.unexpected("'.'");
        }
        self.bump();
        self.skip_inline_ws();
        if self.peek() == Some('#') {
            while !matches!(self.peek(), Some('\n') | None) {
                self.bump();
            }
        }
        match self.peek() {
            Some('\n') | Some('\r') | None => {}
            _ => return self.unexpected("end of line"),
        }
        self.quads.push(Quad {
            subject,
            predicate,
            object,
            graph,
        });
        Ok(())
    }

    fn skip_inline_ws(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.bump();
        }
    }

    // ---- terminals ----

    fn iri_ref(&mut self) -> Result<String, RdfError> {
        let (line, column) = (self.line, self.col);
        if self.peek() != Some('<') {
            return self.unexpected("'<'");
        }
        self.bump();
        let mut iri = String::new();
        loop {
            match self.peek() {
                None => return self.unexpected("'>'"),
                Some('>') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    self.bump();
                    let c = match self.peek() {
                        Some('u') => {
                            self.bump();
                            self.hex_escape(4)?
                        }
                        Some('U') => {
                            self.bump();
                            self.hex_escape(8)?
                        }
                        _ => return self.unexpected("'u' or 'U' escape in IRI"),
                    };
                    iri.push(c);
                }
                Some(c) if c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.err(format!("character '{}' not allowed in IRI", c.escape_debug()));
                }
                Some(c) => {
                    iri.push(c);
                    self.bump();
                }
            }
        }
        if is_absolute_iri(&iri) {
            return Ok(iri);
        }
        match (&self.base, self.mode) {
            (Some(base), Mode::TriG) => Ok(resolve_iri(base, &iri)),
            _ => Err(RdfError::RelativeIri { iri, line, column }),
        }
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let mut value = 0u32;
        for _ in 0..digits {
            match self.peek().and_then(|c| c.to_digit(16)) {
                Some(d) => {
                    value = value * 16 + d;
                    self.bump();
                }
                None => return self.unexpected("hex digit"),
            }
        }
        match char::from_u32(value) {
            Some(c) => Ok(c),
            None => self.err(format!("invalid code point U+{value:X}")),
        }
    }

    fn blank_label(&mut self) -> Result<Term, RdfError> {
        self.bump_n(2); // "_:"
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                label.push(c);
                self.bump();
            }
            _ => return self.unexpected("blank node label"),
        }
        let rest = self.rest();
        let mut good = 0;
        for (i, c) in rest.char_indices() {
            if !(is_pn_chars(c) || c == '.') {
                break;
            }
            if c != '.' {
                good = i + c.len_utf8();
            }
        }
        label.push_str(&rest[..good]);
        let n = rest[..good].chars().count();
        self.bump_n(n);
        Ok(Term::Blank(label))
    }

    fn prefixed_name(&mut self) -> Result<String, RdfError> {
        let (line, column) = (self.line, self.col);
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if is_pn_chars(c) || c == '.' {
                prefix.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek() != Some(':') {
            return Err(RdfError::Syntax {
                line,
                column,
                message: format!("unexpected token '{prefix}'"),
            });
        }
        self.bump();
        let local = self.local_name()?;
        match self.prefixes.get(&prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => Err(RdfError::UndefinedPrefix { prefix, line, column }),
        }
    }

    fn local_name(&mut self) -> Result<String, RdfError> {
        let rest = self.rest();
        let mut chars = rest.char_indices().peekable();
        let mut good = 0;
        let mut first = true;
        while let Some((i, c)) = chars.next() {
            let ok = if first {
                is_pn_chars_u(c) || c == ':' || c.is_ascii_digit() || c == '%' || c == '\\'
            } else {
                is_pn_chars(c) || c == '.' || c == ':' || c == '%' || c == '\\'
            };
            if !ok {
                break;
            }
            first = false;
            match c {
                '\\' => match chars.next() {
                    Some((j, e)) if "_~.-!$&'()*+,;=/?#@%".contains(e) => good = j + e.len_utf8(),
                    _ => break,
                },
                '%' => {
                    let h1 = chars.next();
                    let h2 = chars.next();
                    match (h1, h2) {
                        (Some((_, a)), Some((j, b))) if a.is_ascii_hexdigit() && b.is_ascii_hexdigit() => {
                            good = j + 1
                        }
                        _ => break,
                    }
                }
                '.' => {}
                _ => good = i + c.len_utf8(),
            }
        }
        let raw = &rest[..good];
        let mut local = String::with_capacity(raw.len());
        let mut it = raw.chars();
        while let Some(c) = it.next() {
            if c == '\\' {
                if let Some(e) = it.next() {
                    local.push(e);
                }
            } else {
                local.push(c);
            }
        }
        let n = raw.chars().count();
        self.bump_n(n);
        Ok(local)
    }

    fn literal(&mut self) -> Result<Term, RdfError> {
        let quote = self.peek().unwrap_or('"');
        let long: String = quote.to_string().repeat(3);
        let lexical = if self.mode == Mode::TriG && self.rest().starts_with(&long) {
            self.bump_n(3);
            self.string_body(quote, true)?
        } else {
            self.bump();
            self.string_body(quote, false)?
        };
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || (c == '-' && !tag.is_empty()) {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return self.err("invalid language tag");
                }
                Ok(Term::Literal(Literal::lang(lexical, tag)))
            }
            Some('^') if self.peek_nth(1) == Some('^') => {
                self.bump_n(2);
                let dt = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    Some(c) if self.mode == Mode::TriG && (is_pn_chars_base(c) || c == ':') => {
                        self.prefixed_name()?
                    }
                    _ => return self.unexpected("datatype IRI"),
                };
                Ok(Term::Literal(Literal::typed(lexical, dt)))
            }
            _ => Ok(Term::Literal(Literal::simple(lexical))),
        }
    }

    fn string_body(&mut self, quote: char, long: bool) -> Result<String, RdfError> {
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return self.unexpected("closing quote"),
                Some('\\') => {
                    self.bump();
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return self.err("invalid escape sequence in string"),
                    };
                    out.push(c);
                }
                Some(c) if c == quote => {
                    if !long {
                        self.bump();
                        return Ok(out);
                    }
                    let triple: String = quote.to_string().repeat(3);
                    if self.rest().starts_with(&triple) {
                        // A long string may end with up to two extra quotes.
                        let mut run = 0usize;
                        for ch in self.rest().chars() {
                            if ch == quote {
                                run += 1;
                            } else {
                                break;
                            }
                        }
                        for _ in 0..run.saturating_sub(3) {
                            out.push(quote);
                        }
                        self.bump_n(run.min(5));
                        if run > 5 {
                            return self.err("too many quotes closing long string");
                        }
                        return Ok(out);
                    }
                    out.push(c);
                    self.bump();
                }
                Some('\n' | '\r') if !long => {
                    return self.err("line break in short string");
                }
                Some(c) => {
                    out.push(c);
                    self.bump();
                }
            }
        }
    }

    fn number(&mut self) -> Result<Term, RdfError> {
        let rest = self.rest();
        let b = rest.as_bytes();
        let mut i = 0;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let int_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let int_digits = i - int_start;
        let mut frac_digits = 0;
        if i + 1 < b.len() && b[i] == b'.' && b[i + 1].is_ascii_digit() {
            i += 1;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
                frac_digits += 1;
            }
        }
        if int_digits == 0 && frac_digits == 0 {
            return self.unexpected("number");
        }
        let mut exponent = false;
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
                exponent = true;
            }
        }
        let lexical = rest[..i].to_string();
        self.bump_n(i);
        let dt = if exponent {
            XSD_DOUBLE
        } else if frac_digits > 0 {
            XSD_DECIMAL
        } else {
            XSD_INTEGER
        };
        Ok(Term::Literal(Literal::typed(lexical, dt)))
    }
}
