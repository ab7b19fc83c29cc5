use super::QueryError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Iri(String),
    /// Prefixed name, split at the first colon.
    PName(String, String),
    Var(String),
    BlankLabel(String),
    Str(String),
    LangTag(String),
    Integer(String),
    Decimal(String),
    Double(String),
    /// Keyword or bare function name, as written.
    Ident(String),
    Punct(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const PUNCT: &[&str] = &[
    "^^", "&&", "||", "!=", "<=", ">=", "{", "}", "(", ")", "[", "]", ".", ";", ",", "*", "/", "|", "^", "+", "?", "!",
    "=", "<", ">", "-",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, QueryError> {
    let mut lx = Lexer { src, pos: 0, line: 1, line_start: 0 };
    let mut out = Vec::new();
    loop {
        lx.skip_ws();
        if lx.pos >= src.len() {
            return Ok(out);
        }
        let (line, column) = (lx.line, lx.pos - lx.line_start + 1);
        let tok = lx.next_tok()?;
        out.push(Token { tok, line, column });
    }
}

fn is_pn_chars(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '\u{b7}'
}

impl Lexer<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.line_start = self.pos;
        }
        Some(c)
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { message: message.into(), line: self.line, column: self.pos - self.line_start + 1 }
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

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    /// Name characters, without a trailing `.` (which ends a triple).
    fn name(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            let continues = is_pn_chars(c) || c == ':' || c == '%';
            if !continues || (c == '.' && !self.peek_at(1).is_some_and(|n| is_pn_chars(n) && n != '.')) {
                break;
            }
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    fn next_tok(&mut self) -> Result<Tok, QueryError> {
        let c = self.peek().expect("caller checks for input");
        if c == '<' {
            if let Some(iri) = self.try_iri() {
                return Ok(Tok::Iri(iri));
            }
        }
        if c == '"' || c == '\'' {
            return self.string(c).map(Tok::Str);
        }
        if (c == '?' || c == '$') && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || n == '_') {
            self.bump();
            return Ok(Tok::Var(self.take_while(|c| c.is_alphanumeric() || c == '_')));
        }
        if c == '_' && self.peek_at(1) == Some(':') {
            self.bump();
            self.bump();
            return Ok(Tok::BlankLabel(self.name()));
        }
        if c == '@' {
            self.bump();
            let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
            if tag.is_empty() {
                return Err(self.err("empty language tag"));
            }
            return Ok(Tok::LangTag(tag));
        }
        if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|n| n.is_ascii_digit())) {
            return Ok(self.number());
        }
        if c.is_alphabetic() || c == ':' {
            let word = self.name();
            if let Some(i) = word.find(':') {
                return Ok(Tok::PName(word[..i].to_string(), word[i + 1..].to_string()));
            }
            if self.peek() == Some(':') {
                self.bump();
                let local = self.name();
                return Ok(Tok::PName(word, local));
            }
            return Ok(Tok::Ident(word));
        }
        for p in PUNCT {
            if self.rest().starts_with(p) {
                for _ in 0..p.len() {
                    self.bump();
                }
                return Ok(Tok::Punct(p));
            }
        }
        Err(self.err(format!("unexpected character {c:?}")))
    }

    /// An IRI reference if `<` opens one; otherwise leaves the position
    /// untouched so `<` lexes as an operator.
    fn try_iri(&mut self) -> Option<String> {
        let body = &self.rest()[1..];
        let end = body.find(|c: char| c == '>' || c.is_whitespace() || "<\"{}|^`".contains(c))?;
        if !body[end..].starts_with('>') {
            return None;
        }
        let iri = unescape_iri(&body[..end])?;
        for _ in 0..body[..end].chars().count() + 2 {
            self.bump();
        }
        Some(iri)
    }

    fn number(&mut self) -> Tok {
        let int = self.take_while(|c| c.is_ascii_digit());
        let mut text = int;
        let mut decimal = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            decimal = true;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let sign = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                text.push(self.bump().unwrap());
                if sign {
                    text.push(self.bump().unwrap());
                }
                text.push_str(&self.take_while(|c| c.is_ascii_digit()));
                return Tok::Double(text);
            }
        }
        if decimal {
            Tok::Decimal(text)
        } else {
            Tok::Integer(text)
        }
    }

    fn string(&mut self, quote: char) -> Result<String, QueryError> {
        let long = self.rest().starts_with(&quote.to_string().repeat(3));
        let n = if long { 3 } else { 1 };
        for _ in 0..n {
            self.bump();
        }
        let mut out = String::new();
        loop {
            let c = self.bump().ok_or_else(|| self.err("unterminated string"))?;
            if c == quote {
                if !long {
                    return Ok(out);
                }
                if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                    self.bump();
                    self.bump();
                    return Ok(out);
                }
                out.push(c);
            } else if c == '\\' {
                let e = self.bump().ok_or_else(|| self.err("unterminated escape"))?;
                match e {
                    't' => out.push('\t'),
                    'n' => out.push('\n'),
                    'r' => out.push('\r'),
                    'b' => out.push('\u{8}'),
                    'f' => out.push('\u{c}'),
                    '"' | '\'' | '\\' => out.push(e),
                    'u' | 'U' => {
                        let len = if e == 'u' { 4 } else { 8 };
                        let hex: String = (0..len).filter_map(|_| self.bump()).collect();
                        let ch = u32::from_str_radix(&hex, 16)
                            .ok()
                            .and_then(char::from_u32)
                            .ok_or_else(|| self.err(format!("bad unicode escape \\{e}{hex}")))?;
                        out.push(ch);
                    }
                    _ => return Err(self.err(format!("unknown escape \\{e}"))),
                }
            } else if !long && (c == '\n' || c == '\r') {
                return Err(self.err("newline in short string"));
            } else {
                out.push(c);
            }
        }
    }
}

/// Decodes `\uXXXX` and `\UXXXXXXXX` escapes; any other backslash rejects the IRI.
fn unescape_iri(raw: &str) -> Option<String> {
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        let width = match chars.next()? {
            'u' => 4,
            'U' => 8,
            _ => return None,
        };
        let hex: String = chars.by_ref().take(width).collect();
        if hex.len() != width {
            return None;
        }
        out.push(char::from_u32(u32::from_str_radix(&hex, 16).ok()?)?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn less_than_versus_iri() {
        assert_eq!(toks("?d <= 30"), vec![Tok::Var("d".into()), Tok::Punct("<="), Tok::Integer("30".into())]);
        assert_eq!(toks("<http://x/y>"), vec![Tok::Iri("http://x/y".into())]);
        assert_eq!(toks("?a<?b"), vec![Tok::Var("a".into()), Tok::Punct("<"), Tok::Var("b".into())]);
    }

    #[test]
    fn iri_escapes_decode() {
        assert_eq!(toks(r"<http://x/a\u003Eb>"), vec![Tok::Iri("http://x/a>b".into())]);
        assert_eq!(toks(r"<http://x/\u00e9t\u00E9>"), vec![Tok::Iri("http://x/\u{e9}t\u{e9}".into())]);
        let t = crate::rdf::Term::iri("http://x/{a} b\"c");
        assert_eq!(toks(&t.to_string()), vec![Tok::Iri("http://x/{a} b\"c".into())]);
    }

    #[test]
    fn prefixed_names_keep_inner_dots() {
        assert_eq!(
            toks("iso28258:Site.typicalProfile ?x ."),
            vec![Tok::PName("iso28258".into(), "Site.typicalProfile".into()), Tok::Var("x".into()), Tok::Punct(".")]
        );
        assert_eq!(toks("g:a-b."), vec![Tok::PName("g".into(), "a-b".into()), Tok::Punct(".")]);
    }

    #[test]
    fn path_modifiers_and_numbers() {
        assert_eq!(
            toks("skos:broader* ?x 2.5 1e3"),
            vec![
                Tok::PName("skos".into(), "broader".into()),
                Tok::Punct("*"),
                Tok::Var("x".into()),
                Tok::Decimal("2.5".into()),
                Tok::Double("1e3".into())
            ]
        );
    }
}
