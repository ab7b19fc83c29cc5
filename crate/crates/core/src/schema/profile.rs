use std::fmt;

use crate::rdf::vocab::{owl, rdf, rdfs};
use crate::rdf::{read_list, write_list, Graph, Term};

use super::SchemaError;

/// The filler of a some/all-values-from restriction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    /// A named class or a datatype IRI.
    Named(String),
    Union(Vec<String>),
}

impl ClassExpr {
    pub fn members(&self) -> Vec<&str> {
        match self {
            ClassExpr::Named(c) => vec![c.as_str()],
            ClassExpr::Union(cs) => cs.iter().map(String::as_str).collect(),
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Named(c) => write!(f, "<{c}>"),
            ClassExpr::Union(cs) => {
                f.write_str("union(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "<{c}>")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RestrictionKind {
    SomeValuesFrom(ClassExpr),
    AllValuesFrom(ClassExpr),
    HasValue(Term),
    Cardinality(u64),
    MinCardinality(u64),
    MaxCardinality(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RestrictionSpec {
    pub on_property: String,
    pub kind: RestrictionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Observation,
    QuantityValue,
    SpatialObject,
    /// Subclasses of skos:Concept: codelist and procedure classes.
    Codelist,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProfile {
    pub class: String,
    /// Named superclasses asserted directly on the class.
    pub superclasses: Vec<String>,
    pub restrictions: Vec<RestrictionSpec>,
    pub category: Category,
}

impl ClassProfile {
    pub fn restrictions_on<'a>(&'a self, property: &'a str) -> impl Iterator<Item = &'a RestrictionSpec> + 'a {
        self.restrictions.iter().filter(move |r| r.on_property == property)
    }

    /// The class with its superclass and restriction triples, the inverse
    /// of [`decode_class`].
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        let class = Term::iri(&self.class);
        let sub = Term::iri(rdfs::SUB_CLASS_OF);
        g.add(class.clone(), Term::iri(rdf::TYPE), Term::iri(owl::CLASS));
        for s in &self.superclasses {
            g.add(class.clone(), sub.clone(), Term::iri(s));
        }
        for r in &self.restrictions {
            let node = g.fresh_blank();
            g.add(class.clone(), sub.clone(), node.clone());
            g.add(node.clone(), Term::iri(rdf::TYPE), Term::iri(owl::RESTRICTION));
            g.add(node.clone(), Term::iri(owl::ON_PROPERTY), Term::iri(&r.on_property));
            let count = |n: u64| Term::typed(n.to_string(), crate::rdf::vocab::xsd::NON_NEGATIVE_INTEGER);
            let (pred, value) = match &r.kind {
                RestrictionKind::SomeValuesFrom(e) => (owl::SOME_VALUES_FROM, class_expr_term(&mut g, e)),
                RestrictionKind::AllValuesFrom(e) => (owl::ALL_VALUES_FROM, class_expr_term(&mut g, e)),
                RestrictionKind::HasValue(t) => (owl::HAS_VALUE, t.clone()),
                RestrictionKind::Cardinality(n) => (owl::CARDINALITY, count(*n)),
                RestrictionKind::MinCardinality(n) => (owl::MIN_CARDINALITY, count(*n)),
                RestrictionKind::MaxCardinality(n) => (owl::MAX_CARDINALITY, count(*n)),
            };
            g.add(node, Term::iri(pred), value);
        }
        g
    }
}

fn class_expr_term(g: &mut Graph, e: &ClassExpr) -> Term {
    match e {
        ClassExpr::Named(c) => Term::iri(c),
        ClassExpr::Union(cs) => {
            let items: Vec<Term> = cs.iter().map(Term::iri).collect();
            let head = write_list(g, &items);
            let node = g.fresh_blank();
            g.add(node.clone(), Term::iri(owl::UNION_OF), head);
            node
        }
    }
}

/// Named superclasses and decoded restrictions asserted on `class`.
pub(crate) fn decode_class(g: &Graph, class: &str) -> Result<(Vec<String>, Vec<RestrictionSpec>), SchemaError> {
    let node = Term::iri(class);
    let mut supers = Vec::new();
    let mut restrictions = Vec::new();
    for sup in g.objects(&node, rdfs::SUB_CLASS_OF) {
        match sup {
            Term::Iri(iri) => supers.push(iri.clone()),
            Term::BlankNode(_) => {
                let is_restriction =
                    g.has(sup, rdf::TYPE, &Term::iri(owl::RESTRICTION)) || g.object(sup, owl::ON_PROPERTY).is_some();
                if is_restriction {
                    restrictions.push(decode_restriction(g, class, sup)?);
                }
            }
            Term::Literal(_) => {}
        }
    }
    Ok((supers, restrictions))
}

fn decode_restriction(g: &Graph, class: &str, node: &Term) -> Result<RestrictionSpec, SchemaError> {
    let fail = |reason: &str| SchemaError::UndecodableRestriction {
        class: class.to_string(),
        node: node.clone(),
        reason: reason.to_string(),
    };
    let on_property = g
        .object(node, owl::ON_PROPERTY)
        .and_then(Term::as_iri)
        .ok_or_else(|| fail("missing owl:onProperty"))?
        .to_string();
    let class_expr = |t: &Term| -> Result<ClassExpr, SchemaError> {
        match t {
            Term::Iri(iri) => Ok(ClassExpr::Named(iri.clone())),
            Term::BlankNode(_) => {
                let head = g.object(t, owl::UNION_OF).ok_or_else(|| fail("unsupported class expression"))?;
                let members = read_list(g, head).map_err(|e| fail(&e.to_string()))?;
                let iris: Option<Vec<String>> = members.iter().map(|m| m.as_iri().map(str::to_string)).collect();
                match iris {
                    Some(v) if !v.is_empty() => Ok(ClassExpr::Union(v)),
                    _ => Err(fail("union must list one or more named classes")),
                }
            }
            Term::Literal(_) => Err(fail("class expression is a literal")),
        }
    };
    let count = |t: &Term| -> Result<u64, SchemaError> {
        t.as_literal()
            .and_then(|l| l.lexical().trim().parse().ok())
            .ok_or_else(|| fail("cardinality is not a non-negative integer"))
    };
    let mut kinds = Vec::new();
    if let Some(t) = g.object(node, owl::SOME_VALUES_FROM) {
        kinds.push(RestrictionKind::SomeValuesFrom(class_expr(t)?));
    }
    if let Some(t) = g.object(node, owl::ALL_VALUES_FROM) {
        kinds.push(RestrictionKind::AllValuesFrom(class_expr(t)?));
    }
    if let Some(t) = g.object(node, owl::HAS_VALUE) {
        kinds.push(RestrictionKind::HasValue(t.clone()));
    }
    if let Some(t) = g.object(node, owl::CARDINALITY) {
        kinds.push(RestrictionKind::Cardinality(count(t)?));
    }
    if let Some(t) = g.object(node, owl::MIN_CARDINALITY) {
        kinds.push(RestrictionKind::MinCardinality(count(t)?));
    }
    if let Some(t) = g.object(node, owl::MAX_CARDINALITY) {
        kinds.push(RestrictionKind::MaxCardinality(count(t)?));
    }
    match kinds.len() {
        1 => Ok(RestrictionSpec { on_property, kind: kinds.pop().unwrap() }),
        0 => Err(fail("no restriction kind")),
        _ => Err(fail("more than one restriction kind")),
    }
}
