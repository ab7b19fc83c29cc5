use std::collections::BTreeMap;

use crate::rdf::vocab::{gsp, rdf, xsd, WELL_KNOWN_PREFIXES};
use crate::rdf::Term;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::QueryError;

const BIF_CONTAINS: &str = "http://www.openlinksw.com/schemas/bif#contains";

/// Keywords outside the supported subset; they fail with a named error.
const UNSUPPORTED: &[&str] = &[
    "OPTIONAL",
    "MINUS",
    "BIND",
    "VALUES",
    "GRAPH",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "GROUP",
    "HAVING",
    "OFFSET",
    "FROM",
    "INSERT",
    "DELETE",
    "LOAD",
    "CLEAR",
    "DROP",
    "CREATE",
    "WITH",
    "NOT",
    "EXISTS",
    "IN",
    "REGEX",
];

/// Parses a query in the supported SPARQL subset. GloSIS and W3C prefixes
/// are predeclared; `PREFIX` declarations override them.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let tokens = tokenize(text)?;
    let mut prefixes: BTreeMap<String, String> =
        WELL_KNOWN_PREFIXES.iter().map(|(p, n)| (p.to_string(), n.to_string())).collect();
    let mut p = Parser { tokens, pos: 0, prefixes: &mut prefixes, base: None, fresh: 0 };
    let q = p.query()?;
    if p.pos < p.tokens.len() {
        return Err(p.unexpected("end of query"));
    }
    Ok(q)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: &'a mut BTreeMap<String, String>,
    base: Option<oxiri::Iri<String>>,
    fresh: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + n).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn position(&self) -> (usize, usize) {
        match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        }
    }

    fn error(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self.position();
        QueryError::Syntax { message: message.into(), line, column }
    }

    fn unexpected(&self, expected: &str) -> QueryError {
        match self.peek() {
            Some(t) => self.error(format!("expected {expected}, found {}", describe(t))),
            None => self.error(format!("expected {expected}, found end of query")),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(kw))
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(x)) if *x == p)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{p}'")))
        }
    }

    /// Rejects a keyword outside the subset with a named error.
    fn check_unsupported(&self) -> Result<(), QueryError> {
        if let Some(Tok::Ident(w)) = self.peek() {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                let (line, column) = self.position();
                let feature = match upper.as_str() {
                    "GROUP" | "ORDER" => format!("{upper} BY"),
                    "INSERT" | "DELETE" | "LOAD" | "CLEAR" | "DROP" | "CREATE" | "WITH" => "SPARQL UPDATE".into(),
                    _ => upper,
                };
                return Err(QueryError::Unsupported { feature, line, column });
            }
        }
        Ok(())
    }

    fn resolve(&self, raw: &str) -> Result<String, QueryError> {
        crate::transform::resolve_iri(self.base.as_ref(), raw).map_err(|e| self.error(e))
    }

    fn pname(&self, prefix: &str, local: &str) -> Result<String, QueryError> {
        match self.prefixes.get(prefix) {
            Some(ns) => Ok(format!("{ns}{}", local.replace('\\', ""))),
            None => Err(self.error(format!("undefined prefix {prefix:?}"))),
        }
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        loop {
            if self.eat_keyword("PREFIX") {
                let Some(Tok::PName(prefix, local)) = self.next() else {
                    return Err(self.error("expected prefix name after PREFIX"));
                };
                if !local.is_empty() {
                    return Err(self.error("prefix declaration must end with ':'"));
                }
                let Some(Tok::Iri(iri)) = self.next() else {
                    return Err(self.error("expected IRI in PREFIX declaration"));
                };
                let iri = self.resolve(&iri)?;
                self.prefixes.insert(prefix, iri);
            } else if self.eat_keyword("BASE") {
                let Some(Tok::Iri(iri)) = self.next() else {
                    return Err(self.error("expected IRI after BASE"));
                };
                let iri = self.resolve(&iri)?;
                self.base = Some(oxiri::Iri::parse(iri).map_err(|e| self.error(e.to_string()))?);
            } else {
                break;
            }
        }
        self.check_unsupported()?;
        self.select()
    }

    fn select(&mut self) -> Result<Query, QueryError> {
        self.expect_keyword("SELECT")?;
        // REDUCED permits but does not require duplicate elimination.
        let distinct = self.eat_keyword("DISTINCT");
        if !distinct {
            self.eat_keyword("REDUCED");
        }
        let projection = if self.eat_punct("*") {
            Projection::All
        } else {
            let mut items = Vec::new();
            let mut unnamed = 0;
            loop {
                match self.peek() {
                    Some(Tok::Var(_)) => {
                        let Some(Tok::Var(v)) = self.next() else { unreachable!() };
                        items.push(SelectItem::Var(v));
                    }
                    Some(Tok::Punct("(")) => {
                        self.pos += 1;
                        let expr = self.expr()?;
                        let alias = if self.eat_keyword("AS") {
                            self.var()?
                        } else {
                            unnamed += 1;
                            format!("callret_{}", unnamed - 1)
                        };
                        self.expect_punct(")")?;
                        items.push(SelectItem::Expr { expr, alias });
                    }
                    Some(Tok::Ident(w)) if aggregate_fn(w).is_some() => {
                        // Bare aggregates as written in the published queries.
                        let expr = self.primary()?;
                        let alias = if self.eat_keyword("AS") {
                            self.var()?
                        } else {
                            unnamed += 1;
                            format!("callret_{}", unnamed - 1)
                        };
                        items.push(SelectItem::Expr { expr, alias });
                    }
                    _ => break,
                }
            }
            if items.is_empty() {
                return Err(self.unexpected("projection"));
            }
            Projection::Items(items)
        };
        self.check_unsupported()?;
        self.eat_keyword("WHERE");
        let pattern = self.group()?;
        self.check_unsupported()?;
        let mut order_by = Vec::new();
        if self.eat_keyword("ORDER") {
            self.expect_keyword("BY")?;
            loop {
                if self.eat_keyword("ASC") || self.is_keyword("DESC") {
                    let descending = self.eat_keyword("DESC");
                    self.expect_punct("(")?;
                    let expr = self.expr()?;
                    self.expect_punct(")")?;
                    order_by.push(OrderKey { expr, descending });
                } else if matches!(self.peek(), Some(Tok::Var(_))) {
                    order_by.push(OrderKey { expr: Expr::Var(self.var()?), descending: false });
                } else if self.is_punct("(") {
                    self.pos += 1;
                    let expr = self.expr()?;
                    self.expect_punct(")")?;
                    order_by.push(OrderKey { expr, descending: false });
                } else {
                    break;
                }
            }
            if order_by.is_empty() {
                return Err(self.unexpected("order condition"));
            }
        }
        self.check_unsupported()?;
        let limit = if self.eat_keyword("LIMIT") {
            match self.next() {
                Some(Tok::Integer(n)) => Some(n.parse().map_err(|_| self.error("LIMIT out of range"))?),
                _ => return Err(self.error("expected integer after LIMIT")),
            }
        } else {
            None
        };
        self.check_unsupported()?;
        let q = Query { distinct, projection, pattern, order_by, limit };
        self.check_projection(&q)?;
        Ok(q)
    }

    fn check_projection(&self, q: &Query) -> Result<(), QueryError> {
        let Projection::Items(items) = &q.projection else { return Ok(()) };
        let scope = q.pattern.in_scope_vars();
        let aggregate = q.is_aggregate();
        let mut seen: Vec<&str> = Vec::new();
        for item in items {
            if seen.contains(&item.name()) {
                return Err(self.error(format!("?{} projected twice", item.name())));
            }
            match item {
                SelectItem::Var(v) => {
                    if aggregate {
                        return Err(
                            self.error(format!("?{v} cannot be projected next to an aggregate without GROUP BY"))
                        );
                    }
                    if !scope.contains(v) {
                        return Err(self.error(format!("?{v} is not bound in the WHERE clause")));
                    }
                }
                SelectItem::Expr { alias, .. } => {
                    if scope.contains(alias) {
                        return Err(self.error(format!("alias ?{alias} is already bound in the WHERE clause")));
                    }
                }
            }
            seen.push(item.name());
        }
        Ok(())
    }

    fn var(&mut self) -> Result<String, QueryError> {
        match self.next() {
            Some(Tok::Var(v)) => Ok(v),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("variable"))
            }
        }
    }

    fn group(&mut self) -> Result<GroupPattern, QueryError> {
        self.expect_punct("{")?;
        if self.is_keyword("SELECT") {
            let q = self.select()?;
            self.expect_punct("}")?;
            return Ok(GroupPattern { elements: vec![Element::SubSelect(Box::new(q))] });
        }
        let mut elements = Vec::new();
        let mut bgp: Vec<TriplePattern> = Vec::new();
        let flush = |bgp: &mut Vec<TriplePattern>, elements: &mut Vec<Element>| {
            if !bgp.is_empty() {
                elements.push(Element::Bgp(std::mem::take(bgp)));
            }
        };
        loop {
            self.check_unsupported()?;
            if self.eat_punct("}") {
                break;
            }
            if self.eat_keyword("FILTER") {
                let e = if self.is_punct("(") {
                    self.pos += 1;
                    let e = self.expr()?;
                    self.expect_punct(")")?;
                    e
                } else {
                    self.primary()?
                };
                flush(&mut bgp, &mut elements);
                elements.push(Element::Filter(e));
                self.eat_punct(".");
            } else if self.is_punct("{") {
                flush(&mut bgp, &mut elements);
                let first = self.group()?;
                let mut branches = vec![first];
                while self.eat_keyword("UNION") {
                    branches.push(self.group()?);
                }
                if branches.len() == 1 {
                    let mut g = branches.pop().unwrap();
                    // `{ SELECT ... }` is the subquery itself.
                    if matches!(g.elements.as_slice(), [Element::SubSelect(_)]) {
                        elements.push(g.elements.pop().unwrap());
                    } else {
                        elements.push(Element::Group(g));
                    }
                } else {
                    elements.push(Element::Union(branches));
                }
                self.eat_punct(".");
            } else if self.eat_keyword("SERVICE") {
                flush(&mut bgp, &mut elements);
                let silent = self.eat_keyword("SILENT");
                let endpoint = match self.next() {
                    Some(Tok::Iri(i)) => self.resolve(&i)?,
                    Some(Tok::PName(p, l)) => self.pname(&p, &l)?,
                    Some(Tok::Var(_)) => {
                        self.pos -= 1;
                        let (line, column) = self.position();
                        return Err(QueryError::Unsupported { feature: "SERVICE ?var".into(), line, column });
                    }
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("endpoint IRI"));
                    }
                };
                let pattern = self.group()?;
                elements.push(Element::Service { endpoint, silent, pattern });
                self.eat_punct(".");
            } else {
                let before = elements.len();
                self.triples_block(&mut bgp, &mut elements)?;
                if elements.len() > before {
                    // A bif:contains rewrite was emitted as a filter; keep
                    // the triples preceding it in their own block.
                    let filters: Vec<Element> = elements.drain(before..).collect();
                    flush(&mut bgp, &mut elements);
                    elements.extend(filters);
                }
            }
        }
        flush(&mut bgp, &mut elements);
        Ok(GroupPattern { elements })
    }

    /// One subject with its property list, up to and including an optional
    /// trailing `.`.
    fn triples_block(&mut self, bgp: &mut Vec<TriplePattern>, extra: &mut Vec<Element>) -> Result<(), QueryError> {
        let subject = self.term_pattern(true)?;
        loop {
            let verb = self.verb()?;
            loop {
                let object = self.term_pattern(false)?;
                match &verb {
                    Verb::Path(PathExpr::Predicate(p)) if p == BIF_CONTAINS => {
                        let lhs = pattern_expr(&subject);
                        extra.push(Element::Filter(Expr::Call(
                            Function::TextContains,
                            vec![lhs, pattern_expr(&object)],
                        )));
                    }
                    _ => bgp.push(TriplePattern { subject: subject.clone(), verb: verb.clone(), object }),
                }
                if !self.eat_punct(",") {
                    break;
                }
            }
            if !self.eat_punct(";") {
                break;
            }
            while self.eat_punct(";") {}
            if self.is_punct(".") || self.is_punct("}") {
                break;
            }
        }
        if !self.eat_punct(".") && !self.is_punct("}") && !self.is_punct("{") && !self.is_keyword("FILTER") {
            self.check_unsupported()?;
            if !self.is_keyword("SERVICE") {
                return Err(self.unexpected("'.' or '}'"));
            }
        }
        Ok(())
    }

    fn verb(&mut self) -> Result<Verb, QueryError> {
        if let Some(Tok::Var(_)) = self.peek() {
            return Ok(Verb::Var(self.var()?));
        }
        Ok(Verb::Path(self.path()?))
    }

    fn path(&mut self) -> Result<PathExpr, QueryError> {
        let mut alts = vec![self.path_sequence()?];
        while self.eat_punct("|") {
            alts.push(self.path_sequence()?);
        }
        Ok(if alts.len() == 1 { alts.pop().unwrap() } else { PathExpr::Alternative(alts) })
    }

    fn path_sequence(&mut self) -> Result<PathExpr, QueryError> {
        let mut seq = vec![self.path_elt_or_inverse()?];
        while self.eat_punct("/") {
            seq.push(self.path_elt_or_inverse()?);
        }
        Ok(if seq.len() == 1 { seq.pop().unwrap() } else { PathExpr::Sequence(seq) })
    }

    fn path_elt_or_inverse(&mut self) -> Result<PathExpr, QueryError> {
        if self.eat_punct("^") {
            return Ok(self.path_elt()?.inverse());
        }
        self.path_elt()
    }

    fn path_elt(&mut self) -> Result<PathExpr, QueryError> {
        let primary = match self.next() {
            Some(Tok::Iri(i)) => PathExpr::Predicate(self.resolve(&i)?),
            Some(Tok::PName(p, l)) => PathExpr::Predicate(self.pname(&p, &l)?),
            Some(Tok::Ident(w)) if w == "a" => PathExpr::Predicate(rdf::TYPE.into()),
            Some(Tok::Punct("(")) => {
                let p = self.path()?;
                self.expect_punct(")")?;
                p
            }
            Some(Tok::Punct("!")) => {
                self.pos -= 1;
                let (line, column) = self.position();
                return Err(QueryError::Unsupported { feature: "negated property set".into(), line, column });
            }
            _ => {
                self.pos -= 1;
                self.check_unsupported()?;
                return Err(self.unexpected("predicate or property path"));
            }
        };
        // A modifier must follow the primary directly; `?x` after a path is
        // an object variable, not a modifier.
        Ok(if self.eat_punct("*") {
            PathExpr::ZeroOrMore(Box::new(primary))
        } else if self.eat_punct("+") {
            PathExpr::OneOrMore(Box::new(primary))
        } else if self.eat_punct("?") {
            PathExpr::ZeroOrOne(Box::new(primary))
        } else {
            primary
        })
    }

    fn term_pattern(&mut self, subject: bool) -> Result<TermPattern, QueryError> {
        match self.peek() {
            Some(Tok::Var(_)) => Ok(TermPattern::Var(self.var()?)),
            Some(Tok::BlankLabel(_)) => {
                let Some(Tok::BlankLabel(l)) = self.next() else { unreachable!() };
                Ok(TermPattern::Var(format!("_:{l}")))
            }
            Some(Tok::Punct("[")) => {
                if matches!(self.peek_at(1), Some(Tok::Punct("]"))) {
                    self.pos += 2;
                    self.fresh += 1;
                    return Ok(TermPattern::Var(format!("_:anon{}", self.fresh)));
                }
                let (line, column) = self.position();
                Err(QueryError::Unsupported { feature: "blank node property list".into(), line, column })
            }
            Some(Tok::Punct("(")) => {
                let (line, column) = self.position();
                Err(QueryError::Unsupported { feature: "RDF collection in pattern".into(), line, column })
            }
            _ => {
                let t = self.term()?;
                if subject && t.is_literal() {
                    return Err(self.error("literal in subject position"));
                }
                Ok(TermPattern::Term(t))
            }
        }
    }

    /// A constant: IRI, prefixed name, literal, number or boolean.
    fn term(&mut self) -> Result<Term, QueryError> {
        match self.next() {
            Some(Tok::Iri(i)) => Ok(Term::iri(self.resolve(&i)?)),
            Some(Tok::PName(p, l)) => Ok(Term::iri(self.pname(&p, &l)?)),
            Some(Tok::Str(s)) => {
                if let Some(Tok::LangTag(_)) = self.peek() {
                    let Some(Tok::LangTag(tag)) = self.next() else { unreachable!() };
                    return Ok(Term::lang(s, tag.to_ascii_lowercase()));
                }
                if self.eat_punct("^^") {
                    let dt = match self.next() {
                        Some(Tok::Iri(i)) => self.resolve(&i)?,
                        Some(Tok::PName(p, l)) => self.pname(&p, &l)?,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("datatype IRI"));
                        }
                    };
                    return Ok(Term::typed(s, dt));
                }
                Ok(Term::literal(s))
            }
            Some(Tok::Integer(n)) => Ok(Term::typed(n, xsd::INTEGER)),
            Some(Tok::Decimal(n)) => Ok(Term::typed(n, xsd::DECIMAL)),
            Some(Tok::Double(n)) => Ok(Term::typed(n, xsd::DOUBLE)),
            Some(Tok::Punct(sign @ ("-" | "+"))) => match self.next() {
                Some(Tok::Integer(n)) => Ok(Term::typed(signed(sign, n), xsd::INTEGER)),
                Some(Tok::Decimal(n)) => Ok(Term::typed(signed(sign, n), xsd::DECIMAL)),
                Some(Tok::Double(n)) => Ok(Term::typed(signed(sign, n), xsd::DOUBLE)),
                _ => {
                    self.pos -= 1;
                    Err(self.unexpected("number"))
                }
            },
            Some(Tok::Ident(w)) if w == "true" || w == "false" => Ok(Term::typed(w, xsd::BOOLEAN)),
            _ => {
                self.pos -= 1;
                self.check_unsupported()?;
                Err(self.unexpected("RDF term"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, QueryError> {
        let mut lhs = self.and_expr()?;
        while self.eat_punct("||") {
            lhs = Expr::Or(Box::new(lhs), Box::new(self.and_expr()?));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, QueryError> {
        let mut lhs = self.relational()?;
        while self.eat_punct("&&") {
            lhs = Expr::And(Box::new(lhs), Box::new(self.relational()?));
        }
        Ok(lhs)
    }

    fn relational(&mut self) -> Result<Expr, QueryError> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Some(Tok::Punct("=")) => CompareOp::Eq,
            Some(Tok::Punct("!=")) => CompareOp::Ne,
            Some(Tok::Punct("<")) => CompareOp::Lt,
            Some(Tok::Punct("<=")) => CompareOp::Le,
            Some(Tok::Punct(">")) => CompareOp::Gt,
            Some(Tok::Punct(">=")) => CompareOp::Ge,
            _ => {
                self.check_unsupported()?;
                return Ok(lhs);
            }
        };
        self.pos += 1;
        Ok(Expr::Compare(op, Box::new(lhs), Box::new(self.additive()?)))
    }

    fn additive(&mut self) -> Result<Expr, QueryError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = if self.eat_punct("+") {
                ArithOp::Add
            } else if self.eat_punct("-") {
                ArithOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Arith(op, Box::new(lhs), Box::new(self.multiplicative()?));
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, QueryError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_punct("*") {
                ArithOp::Mul
            } else if self.eat_punct("/") {
                ArithOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Arith(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, QueryError> {
        if self.eat_punct("!") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if self.eat_punct("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_punct("+") {
            return self.unary();
        }
        self.primary()
    }

    fn args(&mut self) -> Result<Vec<Expr>, QueryError> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if self.eat_punct(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_punct(")") {
                return Ok(args);
            }
            self.expect_punct(",")?;
        }
    }

    fn call(&mut self, func: Function, arity: usize) -> Result<Expr, QueryError> {
        let args = self.args()?;
        if args.len() != arity {
            return Err(self.error(format!("{func} takes {arity} argument(s), got {}", args.len())));
        }
        if func == Function::Bound && !matches!(args[0], Expr::Var(_)) {
            return Err(self.error("BOUND takes a variable"));
        }
        Ok(Expr::Call(func, args))
    }

    fn primary(&mut self) -> Result<Expr, QueryError> {
        self.check_unsupported()?;
        match self.peek().cloned() {
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Expr::Var(v))
            }
            Some(Tok::Ident(w)) if w != "true" && w != "false" => {
                self.pos += 1;
                if let Some(func) = aggregate_fn(&w) {
                    self.expect_punct("(")?;
                    let distinct = self.eat_keyword("DISTINCT");
                    let arg = if func == AggregateFn::Count && self.eat_punct("*") {
                        None
                    } else {
                        Some(Box::new(self.expr()?))
                    };
                    self.expect_punct(")")?;
                    return Ok(Expr::Aggregate { func, distinct, arg });
                }
                match w.to_ascii_uppercase().as_str() {
                    "STR" => self.call(Function::Str, 1),
                    "CONTAINS" => self.call(Function::Contains, 2),
                    "BOUND" => self.call(Function::Bound, 1),
                    "TEXTCONTAINS" => self.call(Function::TextContains, 2),
                    _ => {
                        self.pos -= 1;
                        Err(self.error(format!("unknown builtin {w:?}")))
                    }
                }
            }
            Some(Tok::Iri(_) | Tok::PName(..)) if matches!(self.peek_at(1), Some(Tok::Punct("("))) => {
                let iri = match self.next() {
                    Some(Tok::Iri(i)) => self.resolve(&i)?,
                    Some(Tok::PName(p, l)) => self.pname(&p, &l)?,
                    _ => unreachable!(),
                };
                let Some(func) = function_by_iri(&iri) else {
                    self.pos -= 1;
                    return Err(self.error(format!("unknown builtin <{iri}>")));
                };
                let arity = if func == Function::SfIntersects || func == Function::TextContains { 2 } else { 1 };
                self.call(func, arity)
            }
            _ => Ok(Expr::Const(self.term()?)),
        }
    }
}

fn signed(sign: &str, n: String) -> String {
    if sign == "-" {
        format!("-{n}")
    } else {
        n
    }
}

fn pattern_expr(p: &TermPattern) -> Expr {
    match p {
        TermPattern::Var(v) => Expr::Var(v.clone()),
        TermPattern::Term(t) => Expr::Const(t.clone()),
    }
}

fn aggregate_fn(name: &str) -> Option<AggregateFn> {
    match name.to_ascii_uppercase().as_str() {
        "COUNT" => Some(AggregateFn::Count),
        "SUM" => Some(AggregateFn::Sum),
        "AVG" => Some(AggregateFn::Avg),
        "MIN" => Some(AggregateFn::Min),
        "MAX" => Some(AggregateFn::Max),
        _ => None,
    }
}

const CASTS: &[&str] = &[xsd::INTEGER, xsd::DECIMAL, xsd::FLOAT, xsd::DOUBLE, xsd::STRING, xsd::BOOLEAN];

fn function_by_iri(iri: &str) -> Option<Function> {
    if iri == gsp::SF_INTERSECTS {
        return Some(Function::SfIntersects);
    }
    if iri == BIF_CONTAINS {
        return Some(Function::TextContains);
    }
    CASTS.iter().find(|c| **c == iri).map(|c| Function::Cast(c))
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Iri(i) => format!("<{i}>"),
        Tok::PName(p, l) => format!("{p}:{l}"),
        Tok::Var(v) => format!("?{v}"),
        Tok::BlankLabel(l) => format!("_:{l}"),
        Tok::Str(s) => format!("{s:?}"),
        Tok::LangTag(l) => format!("@{l}"),
        Tok::Integer(n) | Tok::Decimal(n) | Tok::Double(n) => n.clone(),
        Tok::Ident(w) => w.clone(),
        Tok::Punct(p) => format!("'{p}'"),
    }
}
