use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use glosis_core::geo::parse_wkt;
use glosis_core::query::{
    parse_query, Element, Expr, GroupPattern, OrderKey, Projection, Query, QueryError, SelectItem, TermPattern,
    TriplePattern, Verb,
};
use glosis_core::rdf::vocab::{rdf, rdfs, xsd};
use glosis_core::rdf::{Graph, Term};
use glosis_core::schema::OntologyCatalog;
use glosis_core::validate::lexical_valid;

/// Template variables `?_name` are placeholders.
pub const PLACEHOLDER_SIGIL: char = '_';
/// SERVICE IRIs with this prefix are placeholders for an endpoint parameter.
pub const ENDPOINT_PLACEHOLDER: &str = "urn:glosis:param:";

const WKT_LITERAL: &str = "http://www.opengis.net/ont/geosparql#wktLiteral";
const AS_WKT: &str = "http://www.opengis.net/ont/geosparql#asWKT";
const HAS_GEOMETRY: &str = "http://www.opengis.net/ont/geosparql#hasGeometry";
const NUTS_REGION: &str = "http://rdfdata.eionet.europa.eu/ramon/ontology/NUTSRegion";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamKind {
    /// A WKT geometry, bound as a `gsp:wktLiteral`.
    Wkt,
    /// A NUTS code, bound as the region's WKT geometry.
    Nuts,
    /// A concept of the physio-chemical property codelist, by notation or IRI.
    Property,
    /// A procedure concept of the catalog, by notation or IRI.
    Procedure,
    /// A decimal or integer numeral.
    Number,
    /// Free text, bound as a plain string literal.
    Label,
    /// A name in the remote endpoint registry, bound as the endpoint IRI.
    Endpoint,
}

impl ParamKind {
    pub fn parse(s: &str) -> Option<ParamKind> {
        Some(match s {
            "wkt" => ParamKind::Wkt,
            "nuts" => ParamKind::Nuts,
            "property" => ParamKind::Property,
            "procedure" => ParamKind::Procedure,
            "number" => ParamKind::Number,
            "label" => ParamKind::Label,
            "endpoint" => ParamKind::Endpoint,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ParamKind::Wkt => "wkt",
            ParamKind::Nuts => "nuts",
            ParamKind::Property => "property",
            ParamKind::Procedure => "procedure",
            ParamKind::Number => "number",
            ParamKind::Label => "label",
            ParamKind::Endpoint => "endpoint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    pub default: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryTemplate {
    pub method: String,
    pub summary: String,
    pub params: Vec<ParamSpec>,
    /// Result columns, in order.
    pub columns: Vec<String>,
    pub text: String,
    pub query: Query,
}

#[derive(Debug, thiserror::Error)]
pub enum TemplateError {
    #[error("template {method}: {message}")]
    Invalid { method: String, message: String },
    #[error("template {method}: {source}")]
    Query { method: String, source: QueryError },
    #[error("reading templates from {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// A parameter value the template cannot bind.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("missing required parameter {0:?}")]
    Missing(String),
    #[error("unknown parameter {0:?}")]
    Unknown(String),
    #[error("malformed WKT for {name:?}: {message}")]
    MalformedWkt { name: String, message: String },
    #[error("invalid value for {name:?}: {message}")]
    Invalid { name: String, message: String },
}

/// What enumerated parameters resolve against.
pub struct Resolver<'a> {
    pub catalog: &'a OntologyCatalog,
    /// Holds the NUTS regions.
    pub data: &'a Graph,
    /// Remote endpoints by name.
    pub registry: &'a BTreeMap<String, String>,
    /// Concept scheme of the property codelist.
    pub property_scheme: &'a str,
}

impl QueryTemplate {
    /// Parses a template: `#+ summary: ...` and `#+ param NAME: KIND [= DEFAULT]`
    /// lines, then the query.
    pub fn parse(method: &str, text: &str) -> Result<QueryTemplate, TemplateError> {
        let invalid = |message: String| TemplateError::Invalid { method: method.into(), message };
        let mut summary = String::new();
        let mut params: Vec<ParamSpec> = Vec::new();
        for line in text.lines() {
            let Some(front) = line.trim_start().strip_prefix("#+") else { continue };
            let (key, value) = front.split_once(':').ok_or_else(|| invalid(format!("bad front matter {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            if key == "summary" {
                summary = value.to_string();
            } else if let Some(name) = key.strip_prefix("param ") {
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(invalid(format!("bad parameter name {name:?}")));
                }
                if params.iter().any(|p| p.name == name) {
                    return Err(invalid(format!("parameter {name:?} declared twice")));
                }
                let (kind, default) = match value.split_once('=') {
                    Some((k, d)) => (k.trim(), Some(d.trim().to_string())),
                    None => (value, None),
                };
                let kind = ParamKind::parse(kind).ok_or_else(|| invalid(format!("unknown parameter kind {kind:?}")))?;
                params.push(ParamSpec { name: name.into(), kind, default });
            } else {
                return Err(invalid(format!("unknown front matter key {key:?}")));
            }
        }
        let query = parse_query(text).map_err(|source| TemplateError::Query { method: method.into(), source })?;
        if let Projection::Items(items) = &query.projection {
            if let Some(item) = items.iter().find(|i| is_placeholder(i.name())) {
                return Err(invalid(format!("placeholder ?{} is projected", item.name())));
            }
        }
        let used = placeholders(&query);
        let declared: BTreeSet<String> = params.iter().map(|p| p.name.clone()).collect();
        if let Some(missing) = used.difference(&declared).next() {
            return Err(invalid(format!("placeholder {missing:?} has no parameter declaration")));
        }
        if let Some(unused) = declared.difference(&used).next() {
            return Err(invalid(format!("parameter {unused:?} is not used in the query")));
        }
        Ok(QueryTemplate {
            method: method.into(),
            summary,
            params,
            columns: query.output_vars(),
            text: text.to_string(),
            query,
        })
    }

    /// Resolves raw request parameters to RDF terms.
    pub fn bind(
        &self,
        raw: &BTreeMap<String, String>,
        resolver: &Resolver<'_>,
    ) -> Result<BTreeMap<String, Term>, ParamError> {
        if let Some(unknown) = raw.keys().find(|k| !self.params.iter().any(|p| &p.name == *k)) {
            return Err(ParamError::Unknown(unknown.clone()));
        }
        let mut out = BTreeMap::new();
        for p in &self.params {
            let value = raw.get(&p.name).or(p.default.as_ref()).ok_or_else(|| ParamError::Missing(p.name.clone()))?;
            out.insert(p.name.clone(), resolver.resolve(p, value)?);
        }
        Ok(out)
    }

    /// Substitutes bound terms for the placeholders in the parsed query.
    pub fn instantiate(&self, values: &BTreeMap<String, Term>) -> Query {
        substitute_query(&self.query, values)
    }

    /// The query with a marker IRI for every placeholder: the reference
    /// shape for instantiations.
    pub fn dummy_instance(&self) -> Query {
        let marker = Term::iri("urn:glosis:dummy");
        let values = self.params.iter().map(|p| (p.name.clone(), marker.clone())).collect();
        self.instantiate(&values)
    }

    /// Whether every enumerated parameter kind has something to resolve
    /// against in `resolver`.
    pub fn check_enumerations(&self, resolver: &Resolver<'_>) -> Result<(), TemplateError> {
        for p in &self.params {
            let ok = match p.kind {
                ParamKind::Property => resolver.property_codelist().is_some(),
                ParamKind::Procedure => !resolver.catalog.procedures().is_empty(),
                ParamKind::Endpoint => p.default.as_ref().is_none_or(|d| resolver.registry.contains_key(d)),
                _ => true,
            };
            if !ok {
                return Err(TemplateError::Invalid {
                    method: self.method.clone(),
                    message: format!("parameter {:?} of kind {} does not resolve", p.name, p.kind.name()),
                });
            }
        }
        Ok(())
    }
}

/// Loads every `*.rq` file of `dir`, keyed by file stem.
pub fn load_templates(dir: &Path) -> Result<BTreeMap<String, QueryTemplate>, TemplateError> {
    let io = |source| TemplateError::Io { path: dir.display().to_string(), source };
    let mut out = BTreeMap::new();
    let mut paths: Vec<_> =
        fs::read_dir(dir).map_err(io)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>().map_err(io)?;
    paths.sort();
    for path in paths {
        if path.extension().and_then(|e| e.to_str()) != Some("rq") {
            continue;
        }
        let Some(method) = path.file_stem().and_then(|s| s.to_str()) else { continue };
        let text = fs::read_to_string(&path)
            .map_err(|source| TemplateError::Io { path: path.display().to_string(), source })?;
        out.insert(method.to_string(), QueryTemplate::parse(method, &text)?);
    }
    Ok(out)
}

impl Resolver<'_> {
    fn property_codelist(&self) -> Option<&glosis_core::schema::CodeList> {
        self.catalog.codelists().iter().find(|c| c.scheme == self.property_scheme)
    }

    pub fn resolve(&self, spec: &ParamSpec, value: &str) -> Result<Term, ParamError> {
        let invalid = |message: String| ParamError::Invalid { name: spec.name.clone(), message };
        match spec.kind {
            ParamKind::Wkt => match parse_wkt(value) {
                Ok(_) => Ok(Term::typed(value, WKT_LITERAL)),
                Err(e) => Err(ParamError::MalformedWkt { name: spec.name.clone(), message: e.to_string() }),
            },
            ParamKind::Nuts => self.nuts_geometry(value).ok_or_else(|| invalid(format!("unknown NUTS code {value:?}"))),
            ParamKind::Property => {
                let list = self.property_codelist().ok_or_else(|| invalid("no property codelist is loaded".into()))?;
                list.concepts
                    .iter()
                    .find(|c| c.iri == value || c.notation.as_deref() == Some(value))
                    .map(|c| Term::iri(&c.iri))
                    .ok_or_else(|| invalid(format!("{value:?} is not in the property codelist")))
            }
            ParamKind::Procedure => self
                .catalog
                .procedures()
                .iter()
                .flat_map(|s| &s.concepts)
                .find(|c| c.iri == value || c.notation.as_deref() == Some(value))
                .map(|c| Term::iri(&c.iri))
                .ok_or_else(|| invalid(format!("{value:?} is not a known procedure"))),
            ParamKind::Number => {
                if lexical_valid(value, xsd::INTEGER) {
                    Ok(Term::typed(value, xsd::INTEGER))
                } else if lexical_valid(value, xsd::DECIMAL) {
                    Ok(Term::typed(value, xsd::DECIMAL))
                } else {
                    Err(invalid(format!("{value:?} is not a number")))
                }
            }
            ParamKind::Label => Ok(Term::literal(value)),
            ParamKind::Endpoint => self
                .registry
                .get(value)
                .map(Term::iri)
                .ok_or_else(|| invalid(format!("{value:?} is not a registered endpoint"))),
        }
    }

    /// The WKT of the NUTS region labelled `code`.
    fn nuts_geometry(&self, code: &str) -> Option<Term> {
        let label = Term::literal(code);
        let region =
            self.data.subjects(rdfs::LABEL, &label).find(|s| self.data.has(s, rdf::TYPE, &Term::iri(NUTS_REGION)))?;
        self.data.object(region, AS_WKT).cloned().or_else(|| {
            let geometry = self.data.object(region, HAS_GEOMETRY)?;
            self.data.object(geometry, AS_WKT).cloned()
        })
    }
}

fn is_placeholder(var: &str) -> bool {
    var.starts_with(PLACEHOLDER_SIGIL) && var.len() > 1
}

fn placeholder_name(var: &str) -> Option<&str> {
    is_placeholder(var).then(|| &var[1..])
}

/// Parameter names referenced by a query.
pub fn placeholders(q: &Query) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    visit_query(q, &mut |name| {
        out.insert(name.to_string());
    });
    out
}

fn visit_query(q: &Query, f: &mut dyn FnMut(&str)) {
    if let Projection::Items(items) = &q.projection {
        for item in items {
            if let SelectItem::Expr { expr, .. } = item {
                visit_expr(expr, f);
            }
        }
    }
    visit_group(&q.pattern, f);
    for k in &q.order_by {
        visit_expr(&k.expr, f);
    }
}

fn visit_group(g: &GroupPattern, f: &mut dyn FnMut(&str)) {
    for e in &g.elements {
        match e {
            Element::Bgp(tps) => {
                for tp in tps {
                    for p in [&tp.subject, &tp.object] {
                        if let Some(n) = p.var().and_then(placeholder_name) {
                            f(n);
                        }
                    }
                    if let Verb::Var(v) = &tp.verb {
                        if let Some(n) = placeholder_name(v) {
                            f(n);
                        }
                    }
                }
            }
            Element::Filter(e) => visit_expr(e, f),
            Element::Group(g) => visit_group(g, f),
            Element::Union(bs) => bs.iter().for_each(|b| visit_group(b, f)),
            Element::SubSelect(q) => visit_query(q, f),
            Element::Service { endpoint, pattern, .. } => {
                if let Some(n) = endpoint.strip_prefix(ENDPOINT_PLACEHOLDER) {
                    f(n);
                }
                visit_group(pattern, f);
            }
        }
    }
}

fn visit_expr(e: &Expr, f: &mut dyn FnMut(&str)) {
    let mut vars = Vec::new();
    e.vars(&mut vars);
    for v in vars {
        if let Some(n) = placeholder_name(&v) {
            f(n);
        }
    }
}

fn substitute_query(q: &Query, values: &BTreeMap<String, Term>) -> Query {
    let projection = match &q.projection {
        Projection::All => Projection::All,
        Projection::Items(items) => Projection::Items(
            items
                .iter()
                .map(|i| match i {
                    SelectItem::Var(v) => SelectItem::Var(v.clone()),
                    SelectItem::Expr { expr, alias } => {
                        SelectItem::Expr { expr: substitute_expr(expr, values), alias: alias.clone() }
                    }
                })
                .collect(),
        ),
    };
    Query {
        distinct: q.distinct,
        projection,
        pattern: substitute_group(&q.pattern, values),
        order_by: q
            .order_by
            .iter()
            .map(|k| OrderKey { expr: substitute_expr(&k.expr, values), descending: k.descending })
            .collect(),
        limit: q.limit,
    }
}

fn lookup<'a>(var: &str, values: &'a BTreeMap<String, Term>) -> Option<&'a Term> {
    placeholder_name(var).and_then(|n| values.get(n))
}

fn substitute_term(p: &TermPattern, values: &BTreeMap<String, Term>) -> TermPattern {
    match p {
        TermPattern::Var(v) => lookup(v, values).map_or_else(|| p.clone(), |t| TermPattern::Term(t.clone())),
        TermPattern::Term(_) => p.clone(),
    }
}

fn substitute_group(g: &GroupPattern, values: &BTreeMap<String, Term>) -> GroupPattern {
    let elements = g
        .elements
        .iter()
        .map(|e| match e {
            Element::Bgp(tps) => Element::Bgp(
                tps.iter()
                    .map(|tp| TriplePattern {
                        subject: substitute_term(&tp.subject, values),
                        verb: match &tp.verb {
                            Verb::Var(v) => match lookup(v, values) {
                                Some(Term::Iri(iri)) => {
                                    Verb::Path(glosis_core::query::PathExpr::Predicate(iri.clone()))
                                }
                                _ => tp.verb.clone(),
                            },
                            verb => verb.clone(),
                        },
                        object: substitute_term(&tp.object, values),
                    })
                    .collect(),
            ),
            Element::Filter(e) => Element::Filter(substitute_expr(e, values)),
            Element::Group(g) => Element::Group(substitute_group(g, values)),
            Element::Union(bs) => Element::Union(bs.iter().map(|b| substitute_group(b, values)).collect()),
            Element::SubSelect(q) => Element::SubSelect(Box::new(substitute_query(q, values))),
            Element::Service { endpoint, silent, pattern } => {
                let endpoint = match endpoint.strip_prefix(ENDPOINT_PLACEHOLDER).and_then(|n| values.get(n)) {
                    Some(Term::Iri(iri)) => iri.clone(),
                    _ => endpoint.clone(),
                };
                Element::Service { endpoint, silent: *silent, pattern: substitute_group(pattern, values) }
            }
        })
        .collect();
    GroupPattern { elements }
}

fn substitute_expr(e: &Expr, values: &BTreeMap<String, Term>) -> Expr {
    let sub = |x: &Expr| Box::new(substitute_expr(x, values));
    match e {
        Expr::Var(v) => lookup(v, values).map_or_else(|| e.clone(), |t| Expr::Const(t.clone())),
        Expr::Const(_) => e.clone(),
        Expr::Or(a, b) => Expr::Or(sub(a), sub(b)),
        Expr::And(a, b) => Expr::And(sub(a), sub(b)),
        Expr::Not(a) => Expr::Not(sub(a)),
        Expr::Neg(a) => Expr::Neg(sub(a)),
        Expr::Compare(op, a, b) => Expr::Compare(*op, sub(a), sub(b)),
        Expr::Arith(op, a, b) => Expr::Arith(*op, sub(a), sub(b)),
        Expr::Call(func, args) => Expr::Call(*func, args.iter().map(|a| substitute_expr(a, values)).collect()),
        Expr::Aggregate { func, distinct, arg } => {
            Expr::Aggregate { func: *func, distinct: *distinct, arg: arg.as_ref().map(|a| sub(a)) }
        }
    }
}

/// The query with every constant term and SERVICE IRI replaced by one
/// marker, so that two queries compare equal exactly when they differ only
/// in constants.
pub fn erase_constants(q: &Query) -> Query {
    let marker = Term::iri("urn:glosis:constant");
    let mut erased = q.clone();
    erase_query(&mut erased, &marker);
    erased
}

fn erase_query(q: &mut Query, m: &Term) {
    if let Projection::Items(items) = &mut q.projection {
        for item in items {
            if let SelectItem::Expr { expr, .. } = item {
                erase_expr(expr, m);
            }
        }
    }
    erase_group(&mut q.pattern, m);
    for k in &mut q.order_by {
        erase_expr(&mut k.expr, m);
    }
}

fn erase_group(g: &mut GroupPattern, m: &Term) {
    for e in &mut g.elements {
        match e {
            Element::Bgp(tps) => {
                for tp in tps {
                    for p in [&mut tp.subject, &mut tp.object] {
                        if let TermPattern::Term(t) = p {
                            *t = m.clone();
                        }
                    }
                }
            }
            Element::Filter(e) => erase_expr(e, m),
            Element::Group(g) => erase_group(g, m),
            Element::Union(bs) => bs.iter_mut().for_each(|b| erase_group(b, m)),
            Element::SubSelect(q) => erase_query(q, m),
            Element::Service { endpoint, pattern, .. } => {
                *endpoint = m.value().to_string();
                erase_group(pattern, m);
            }
        }
    }
}

fn erase_expr(e: &mut Expr, m: &Term) {
    match e {
        Expr::Var(_) => {}
        Expr::Const(t) => *t = m.clone(),
        Expr::Not(a) | Expr::Neg(a) => erase_expr(a, m),
        Expr::Or(a, b) | Expr::And(a, b) | Expr::Compare(_, a, b) | Expr::Arith(_, a, b) => {
            erase_expr(a, m);
            erase_expr(b, m);
        }
        Expr::Call(_, args) => args.iter_mut().for_each(|a| erase_expr(a, m)),
        Expr::Aggregate { arg, .. } => {
            if let Some(a) = arg {
                erase_expr(a, m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: &str = "#+ summary: s\n#+ param x: label\n#+ param e: endpoint = a\n\
        SELECT ?s WHERE { ?s rdfs:label ?_x . SERVICE <urn:glosis:param:e> { ?s ?p ?_x } FILTER (?_x != \"\") }";

    #[test]
    fn front_matter_and_placeholders() {
        let t = QueryTemplate::parse("m", T).unwrap();
        assert_eq!(t.params.len(), 2);
        assert_eq!(t.params[1].default.as_deref(), Some("a"));
        assert_eq!(t.columns, vec!["s"]);
        assert_eq!(placeholders(&t.query), ["e", "x"].map(String::from).into());
    }

    #[test]
    fn undeclared_and_unused_parameters_are_rejected() {
        assert!(QueryTemplate::parse("m", "SELECT ?s WHERE { ?s ?p ?_x }").is_err());
        assert!(QueryTemplate::parse("m", "#+ param y: label\nSELECT ?s WHERE { ?s ?p ?o }").is_err());
        assert!(QueryTemplate::parse("m", "#+ param y: colour\nSELECT ?s WHERE { ?s ?p ?_y }").is_err());
    }

    #[test]
    fn instantiation_replaces_every_placeholder() {
        let t = QueryTemplate::parse("m", T).unwrap();
        let values: BTreeMap<String, Term> =
            [("x".to_string(), Term::literal("a\"}")), ("e".to_string(), Term::iri("http://remote/sparql"))].into();
        let q = t.instantiate(&values);
        assert!(placeholders(&q).is_empty());
        let text = q.to_string();
        assert!(text.contains("<http://remote/sparql>"), "{text}");
        assert_eq!(parse_query(&text).unwrap(), q);
        assert_eq!(erase_constants(&q), erase_constants(&t.dummy_instance()));
    }
}
