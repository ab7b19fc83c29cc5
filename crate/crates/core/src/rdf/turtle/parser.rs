use std::collections::HashMap;

use oxiri::Iri;

use crate::rdf::graph::{Graph, PrefixMap};
use crate::rdf::term::{Literal, Term, Triple};
use crate::rdf::vocab::{rdf, xsd};

/// A Turtle syntax error, positioned at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct TurtleError {
    pub line: usize,
    pub column: usize,
    pub kind: TurtleErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TurtleErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("undefined prefix '{0}:'")]
    UndefinedPrefix(String),
    #[error("relative IRI <{0}> with no base IRI")]
    RelativeIriWithoutBase(String),
    #[error("invalid IRI <{iri}>: {reason}")]
    InvalidIri { iri: String, reason: String },
}

/// Parses a Turtle document. Blank nodes are relabelled `b0`, `b1`, ... in
/// order of first appearance.
pub fn parse_turtle(text: &str, base: Option<&str>) -> Result<Graph, TurtleError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        base: None,
        prefixes: PrefixMap::new(),
        blank_labels: HashMap::new(),
        blank_counter: 0,
        graph: Graph::new(),
    };
    if let Some(base) = base {
        parser.base =
            Some(Iri::parse(base.to_string()).map_err(|e| {
                parser.error(TurtleErrorKind::InvalidIri { iri: base.to_string(), reason: e.to_string() })
            })?);
    }
    parser.document()?;
    let Parser { mut graph, prefixes, .. } = parser;
    graph.set_prefixes(prefixes);
    Ok(graph)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    base: Option<Iri<String>>,
    prefixes: PrefixMap,
    blank_labels: HashMap<String, Term>,
    blank_counter: usize,
    graph: Graph,
}

fn is_pn_chars_base(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z'
        | '\u{00C0}'..='\u{00D6}' | '\u{00D8}'..='\u{00F6}' | '\u{00F8}'..='\u{02FF}'
        | '\u{0370}'..='\u{037D}' | '\u{037F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}'
        | '\u{2070}'..='\u{218F}' | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}'
        | '\u{F900}'..='\u{FDCF}' | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
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
}

const LOCAL_ESCAPABLE: &str = "_~.-!$&'()*+,;=/?#@%";

impl Parser {
    fn error(&self, kind: TurtleErrorKind) -> TurtleError {
        TurtleError { line: self.line, column: self.column, kind }
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, TurtleError> {
        Err(self.error(TurtleErrorKind::Syntax(msg.into())))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, expected: char) -> Result<(), TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == expected => {
                self.bump();
                Ok(())
            }
            Some(c) => self.syntax(format!("expected '{expected}', found '{c}'")),
            None => self.syntax(format!("expected '{expected}', found end of input")),
        }
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        let matches = kw.chars().enumerate().all(|(i, k)| self.peek_at(i).is_some_and(|c| c.eq_ignore_ascii_case(&k)));
        matches && self.peek_at(n).is_none_or(|c| c.is_whitespace() || c == '<')
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.skip_ws();
            let Some(c) = self.peek() else {
                return Ok(());
            };
            if c == '@' {
                self.at_directive()?;
            } else if self.starts_with_keyword("PREFIX") {
                for _ in 0..6 {
                    self.bump();
                }
                self.prefix_body()?;
            } else if self.starts_with_keyword("BASE") {
                for _ in 0..4 {
                    self.bump();
                }
                self.base_body()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn at_directive(&mut self) -> Result<(), TurtleError> {
        self.bump();
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        match word.as_str() {
            "prefix" => self.prefix_body()?,
            "base" => self.base_body()?,
            other => return self.syntax(format!("unknown directive '@{other}'")),
        }
        self.expect('.')
    }

    fn prefix_body(&mut self) -> Result<(), TurtleError> {
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
                return self.syntax(format!("invalid character '{c}' in prefix name"));
            }
        }
        if prefix.ends_with('.') || prefix.starts_with(|c: char| !is_pn_chars_base(c)) && !prefix.is_empty() {
            return self.syntax(format!("invalid prefix name '{prefix}'"));
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn base_body(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(
            Iri::parse(iri.clone())
                .map_err(|e| self.error(TurtleErrorKind::InvalidIri { iri, reason: e.to_string() }))?,
        );
        Ok(())
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let subject = self.blank_node_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> Result<Term, TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node_label(),
            Some('(') => self.collection(),
            Some(_) => {
                let term = self.prefixed_or_keyword()?;
                match term {
                    Term::Iri(_) => Ok(term),
                    _ => self.syntax("literal in subject position"),
                }
            }
            None => self.syntax("expected subject, found end of input"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        loop {
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
            match self.peek() {
                Some('.') | Some(']') | None => return Ok(()),
                _ => {}
            }
        }
    }

    fn verb(&mut self) -> Result<Term, TurtleError> {
        self.skip_ws();
        if self.peek() == Some('a')
            && self
                .peek_at(1)
                .is_none_or(|c| c.is_whitespace() || c == '<' || c == '[' || c == '"' || c == '(' || c == '_')
        {
            self.bump();
            return Ok(Term::iri(rdf::TYPE));
        }
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some(c) if is_pn_chars_base(c) || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            Some(c) => self.syntax(format!("expected predicate, found '{c}'")),
            None => self.syntax("expected predicate, found end of input"),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Term) -> Result<(), TurtleError> {
        loop {
            let object = self.object()?;
            self.graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_node_label(),
            Some('(') => self.collection(),
            Some('[') => self.blank_node_property_list(),
            Some('"') | Some('\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.numeric(),
            Some(_) => self.prefixed_or_keyword(),
            None => self.syntax("expected object, found end of input"),
        }
    }

    fn prefixed_or_keyword(&mut self) -> Result<Term, TurtleError> {
        for (kw, value) in [("true", "true"), ("false", "false")] {
            let n = kw.len();
            let matches = kw.chars().enumerate().all(|(i, k)| self.peek_at(i) == Some(k));
            if matches && self.peek_at(n).is_none_or(|c| !is_pn_chars(c) && c != ':' && c != '.')
                || matches && self.peek_at(n) == Some('.') && self.peek_at(n + 1).is_none_or(|c| !is_pn_chars(c))
            {
                for _ in 0..n {
                    self.bump();
                }
                return Ok(Term::typed(value, xsd::BOOLEAN));
            }
        }
        match self.peek() {
            Some(c) if is_pn_chars_base(c) || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            Some(c) => self.syntax(format!("unexpected character '{c}'")),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn blank_node_label(&mut self) -> Result<Term, TurtleError> {
        self.bump();
        self.bump();
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                label.push(c);
                self.bump();
            }
            _ => return self.syntax("invalid blank node label"),
        }
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        if let Some(t) = self.blank_labels.get(&label) {
            return Ok(t.clone());
        }
        let t = self.fresh_blank();
        self.blank_labels.insert(label, t.clone());
        Ok(t)
    }

    fn fresh_blank(&mut self) -> Term {
        let t = Term::BlankNode(format!("b{}", self.blank_counter));
        self.blank_counter += 1;
        t
    }

    fn blank_node_property_list(&mut self) -> Result<Term, TurtleError> {
        self.bump();
        let node = self.fresh_blank();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, TurtleError> {
        self.bump();
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.bump();
                    break;
                }
                None => return self.syntax("unterminated collection"),
                _ => items.push(self.object()?),
            }
        }
        if items.is_empty() {
            return Ok(Term::iri(rdf::NIL));
        }
        let cells: Vec<Term> = items.iter().map(|_| self.fresh_blank()).collect();
        for (i, item) in items.into_iter().enumerate() {
            let cell = cells[i].clone();
            let rest = cells.get(i + 1).cloned().unwrap_or_else(|| Term::iri(rdf::NIL));
            self.graph.insert(Triple::new(cell.clone(), Term::iri(rdf::FIRST), item));
            self.graph.insert(Triple::new(cell, Term::iri(rdf::REST), rest));
        }
        Ok(cells[0].clone())
    }

    fn iri(&mut self) -> Result<String, TurtleError> {
        let raw = self.iri_ref()?;
        self.resolve(raw)
    }

    fn resolve(&self, raw: String) -> Result<String, TurtleError> {
        let has_scheme = {
            let mut chars = raw.chars();
            chars.next().is_some_and(|c| c.is_ascii_alphabetic())
                && raw
                    .find(':')
                    .is_some_and(|i| raw[..i].chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)))
        };
        if has_scheme {
            return Ok(raw);
        }
        match &self.base {
            Some(base) => base
                .resolve(&raw)
                .map(|iri| iri.into_inner())
                .map_err(|e| self.error(TurtleErrorKind::InvalidIri { iri: raw, reason: e.to_string() })),
            None => Err(self.error(TurtleErrorKind::RelativeIriWithoutBase(raw))),
        }
    }

    /// Reads `<...>` and decodes UCHAR escapes; no base resolution.
    fn iri_ref(&mut self) -> Result<String, TurtleError> {
        if self.peek() != Some('<') {
            return self.syntax("expected '<'");
        }
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.hex_char(4)?),
                    Some('U') => out.push(self.hex_char(8)?),
                    _ => return self.syntax("invalid escape in IRI"),
                },
                Some(c) if c <= ' ' || "<\"{}|^`".contains(c) => {
                    return self.syntax(format!("invalid character {c:?} in IRI"))
                }
                Some(c) => out.push(c),
                None => return self.syntax("unterminated IRI"),
            }
        }
    }

    fn hex_char(&mut self, n: usize) -> Result<char, TurtleError> {
        let mut value = 0u32;
        for _ in 0..n {
            let Some(d) = self.bump().and_then(|c| c.to_digit(16)) else {
                return self.syntax("invalid hex escape");
            };
            value = value * 16 + d;
        }
        match char::from_u32(value) {
            Some(c) => Ok(c),
            None => self.syntax(format!("invalid code point U+{value:X}")),
        }
    }

    fn prefixed_name(&mut self) -> Result<String, TurtleError> {
        let (line, column) = (self.line, self.column);
        let mut prefix = String::new();
        if self.peek() != Some(':') {
            while let Some(c) = self.peek() {
                if is_pn_chars(c) || c == '.' {
                    prefix.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if prefix.ends_with('.') {
                return self.syntax(format!("invalid prefix name '{prefix}'"));
            }
        }
        if self.peek() != Some(':') {
            return self.syntax(format!("expected ':' after '{prefix}'"));
        }
        self.bump();
        let local = self.local_name()?;
        match self.prefixes.get(&prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => Err(TurtleError { line, column, kind: TurtleErrorKind::UndefinedPrefix(prefix) }),
        }
    }

    fn local_name(&mut self) -> Result<String, TurtleError> {
        let mut out = String::new();
        // Positions of chars that are plain '.' (not escaped) at the tail.
        let mut trailing_dots = 0usize;
        let mut first = true;
        while let Some(c) = self.peek() {
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
                '%' => {
                    let (a, b) = (self.peek_at(1), self.peek_at(2));
                    if !(a.is_some_and(|x| x.is_ascii_hexdigit()) && b.is_some_and(|x| x.is_ascii_hexdigit())) {
                        return self.syntax("invalid percent escape in local name");
                    }
                    for _ in 0..3 {
                        out.push(self.bump().unwrap());
                    }
                    trailing_dots = 0;
                }
                '\\' => {
                    self.bump();
                    match self.bump() {
                        Some(e) if LOCAL_ESCAPABLE.contains(e) => out.push(e),
                        _ => return self.syntax("invalid escape in local name"),
                    }
                    trailing_dots = 0;
                }
                '.' => {
                    out.push(c);
                    self.bump();
                    trailing_dots += 1;
                }
                _ => {
                    out.push(c);
                    self.bump();
                    trailing_dots = 0;
                }
            }
        }
        for _ in 0..trailing_dots {
            out.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        Ok(out)
    }

    fn rdf_literal(&mut self) -> Result<Term, TurtleError> {
        let lexical = self.string()?;
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
                    return self.syntax("invalid language tag");
                }
                Ok(Term::Literal(Literal::lang(lexical, tag)))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.bump();
                self.bump();
                let datatype = match self.peek() {
                    Some('<') => self.iri()?,
                    _ => self.prefixed_name()?,
                };
                Ok(Term::Literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::simple(lexical))),
        }
    }

    fn string(&mut self) -> Result<String, TurtleError> {
        let quote = self.bump().unwrap();
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return self.syntax("unterminated string literal");
            };
            if c == quote {
                if !long {
                    return Ok(out);
                }
                if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                    self.bump();
                    self.bump();
                    // A long string may end with up to two extra quote chars.
                    while self.peek() == Some(quote) {
                        out.push(quote);
                        self.bump();
                    }
                    return Ok(out);
                }
                out.push(c);
                continue;
            }
            match c {
                '\\' => match self.bump() {
                    Some('t') => out.push('\t'),
                    Some('b') => out.push('\u{8}'),
                    Some('n') => out.push('\n'),
                    Some('r') => out.push('\r'),
                    Some('f') => out.push('\u{c}'),
                    Some('"') => out.push('"'),
                    Some('\'') => out.push('\''),
                    Some('\\') => out.push('\\'),
                    Some('u') => out.push(self.hex_char(4)?),
                    Some('U') => out.push(self.hex_char(8)?),
                    _ => return self.syntax("invalid string escape"),
                },
                '\n' | '\r' if !long => return self.syntax("line break in short string literal"),
                c => out.push(c),
            }
        }
    }

    fn numeric(&mut self) -> Result<Term, TurtleError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        let mut int_digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
            int_digits += 1;
        }
        let mut frac_digits = 0;
        let mut is_decimal = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            is_decimal = true;
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
                frac_digits += 1;
            }
        }
        if int_digits + frac_digits == 0 {
            return self.syntax("invalid numeric literal");
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            text.push(e);
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                text.push(c);
                self.bump();
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return self.syntax("invalid exponent in numeric literal");
            }
            return Ok(Term::typed(text, xsd::DOUBLE));
        }
        let dt = if is_decimal { xsd::DECIMAL } else { xsd::INTEGER };
        Ok(Term::typed(text, dt))
    }
}
