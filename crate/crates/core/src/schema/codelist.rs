use std::collections::{BTreeMap, BTreeSet};

use crate::rdf::vocab::{owl, rdf, rdfs, skos, sosa};
use crate::rdf::{read_list, Graph, Term};

use super::OntologyCatalog;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeListConcept {
    pub iri: String,
    pub notation: Option<String>,
    pub pref_label: Option<String>,
    pub definition: Option<String>,
    pub broader: Option<String>,
}

/// A SKOS concept scheme paired with the OWL class enumerating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeList {
    pub scheme: String,
    pub class: String,
    pub label: Option<String>,
    /// Enumeration order when closed, IRI order otherwise.
    pub concepts: Vec<CodeListConcept>,
    /// True when the class carries an owl:oneOf enumeration.
    pub closed: bool,
    /// The class is also a subclass of sosa:ObservableProperty.
    pub observable_property: bool,
    pub scheme_sees_class: bool,
    pub class_sees_scheme: bool,
}

impl CodeList {
    pub fn concept_by_notation(&self, notation: &str) -> Option<&CodeListConcept> {
        self.concepts.iter().find(|c| c.notation.as_deref() == Some(notation))
    }

    pub fn contains(&self, iri: &str) -> bool {
        self.concepts.iter().any(|c| c.iri == iri)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcedureConcept {
    pub iri: String,
    pub notation: Option<String>,
    pub pref_label: Option<String>,
    pub definition: Option<String>,
    /// skos:broader targets, including inverted skos:narrower edges.
    pub broader: Vec<String>,
    pub scope_notes: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcedureScheme {
    pub scheme: String,
    pub concepts: Vec<ProcedureConcept>,
}

impl ProcedureScheme {
    pub fn concept(&self, iri: &str) -> Option<&ProcedureConcept> {
        self.concepts.iter().find(|c| c.iri == iri)
    }

    /// Concepts reachable from `iri` through narrower edges, `iri` included.
    pub fn descendants(&self, iri: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::from([iri.to_string()]);
        loop {
            let before = out.len();
            for c in &self.concepts {
                if c.broader.iter().any(|b| out.contains(b)) {
                    out.insert(c.iri.clone());
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }

    /// A concept lying on a broader cycle, if any.
    pub fn broader_cycle(&self) -> Option<String> {
        let edges: BTreeMap<&str, &[String]> =
            self.concepts.iter().map(|c| (c.iri.as_str(), c.broader.as_slice())).collect();
        for start in edges.keys() {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&str> = edges[start].iter().map(String::as_str).collect();
            while let Some(n) = stack.pop() {
                if n == *start {
                    return Some(start.to_string());
                }
                if seen.insert(n) {
                    if let Some(next) = edges.get(n) {
                        stack.extend(next.iter().map(String::as_str));
                    }
                }
            }
        }
        None
    }
}

fn lexical(g: &Graph, node: &Term, p: &str) -> Option<String> {
    g.object(node, p).map(|t| t.value().to_string())
}

fn is_scheme(g: &Graph, node: &Term) -> bool {
    g.has(node, rdf::TYPE, &Term::iri(skos::CONCEPT_SCHEME))
        || !g.matching(None, Some(&Term::iri(skos::IN_SCHEME)), Some(node)).is_empty()
}

fn is_class(g: &Graph, node: &Term) -> bool {
    g.has(node, rdf::TYPE, &Term::iri(owl::CLASS)) || g.object(node, rdfs::SUB_CLASS_OF).is_some()
}

/// Concepts belonging to `scheme` via skos:inScheme or skos:topConceptOf.
fn scheme_members(g: &Graph, scheme: &Term) -> BTreeSet<Term> {
    g.subjects(skos::IN_SCHEME, scheme).chain(g.subjects(skos::TOP_CONCEPT_OF, scheme)).cloned().collect()
}

pub(super) fn extract_codelists(cat: &OntologyCatalog) -> Vec<CodeList> {
    let g = cat.graph();
    let mut pairs: BTreeSet<(Term, Term)> = BTreeSet::new();
    for t in g.matching(None, Some(&Term::iri(rdfs::SEE_ALSO)), None) {
        if !t.object.is_iri() {
            continue;
        }
        if is_scheme(g, &t.subject) && is_class(g, &t.object) {
            pairs.insert((t.subject.clone(), t.object.clone()));
        } else if is_class(g, &t.subject) && is_scheme(g, &t.object) {
            pairs.insert((t.object.clone(), t.subject.clone()));
        }
    }
    // Enumerations whose members all sit in a single scheme pair with it even
    // without seeAlso links.
    for t in g.matching(None, Some(&Term::iri(owl::ONE_OF)), None) {
        let Ok(members) = read_list(g, &t.object) else { continue };
        let schemes: BTreeSet<&Term> = members.iter().filter_map(|m| g.object(m, skos::IN_SCHEME)).collect();
        if let [scheme] = schemes.into_iter().collect::<Vec<_>>()[..] {
            if scheme.is_iri() && t.subject.is_iri() {
                pairs.insert((scheme.clone(), t.subject.clone()));
            }
        }
    }
    pairs
        .into_iter()
        .map(|(scheme, class)| {
            let enumeration = g.object(&class, owl::ONE_OF).and_then(|h| read_list(g, h).ok());
            let concepts: Vec<Term> = match &enumeration {
                Some(members) => members.clone(),
                None => {
                    let mut set = scheme_members(g, &scheme);
                    set.extend(g.subjects(rdf::TYPE, &class).cloned());
                    set.into_iter().collect()
                }
            };
            CodeList {
                label: lexical(g, &class, rdfs::LABEL).or_else(|| lexical(g, &scheme, skos::PREF_LABEL)),
                concepts: concepts
                    .iter()
                    .map(|c| CodeListConcept {
                        iri: c.value().to_string(),
                        notation: lexical(g, c, skos::NOTATION),
                        pref_label: lexical(g, c, skos::PREF_LABEL),
                        definition: lexical(g, c, skos::DEFINITION),
                        broader: g.object(c, skos::BROADER).map(|b| b.value().to_string()),
                    })
                    .collect(),
                closed: enumeration.is_some(),
                observable_property: cat.is_subclass_of(class.value(), sosa::OBSERVABLE_PROPERTY),
                scheme_sees_class: g.has(&scheme, rdfs::SEE_ALSO, &class),
                class_sees_scheme: g.has(&class, rdfs::SEE_ALSO, &scheme),
                scheme: scheme.value().to_string(),
                class: class.value().to_string(),
            }
        })
        .collect()
}

pub(super) fn extract_procedures(cat: &OntologyCatalog) -> Vec<ProcedureScheme> {
    let g = cat.graph();
    let mut schemes: BTreeSet<Term> = g.instances_of(skos::CONCEPT_SCHEME).cloned().collect();
    for t in g.matching(None, Some(&Term::iri(skos::IN_SCHEME)), None) {
        schemes.insert(t.object);
    }
    let mut out = Vec::new();
    for scheme in schemes.into_iter().filter(Term::is_iri) {
        let members = scheme_members(g, &scheme);
        let is_procedure = |c: &Term| cat.types_of(g, c).contains(sosa::PROCEDURE);
        if members.is_empty() || !members.iter().any(is_procedure) {
            continue;
        }
        let concepts = members
            .iter()
            .map(|c| {
                let mut broader: BTreeSet<String> =
                    g.objects(c, skos::BROADER).map(|b| b.value().to_string()).collect();
                broader.extend(g.subjects(skos::NARROWER, c).map(|b| b.value().to_string()));
                ProcedureConcept {
                    iri: c.value().to_string(),
                    notation: lexical(g, c, skos::NOTATION),
                    pref_label: lexical(g, c, skos::PREF_LABEL),
                    definition: lexical(g, c, skos::DEFINITION),
                    broader: broader.into_iter().collect(),
                    scope_notes: g.objects(c, skos::SCOPE_NOTE).cloned().collect(),
                }
            })
            .collect();
        out.push(ProcedureScheme { scheme: scheme.value().to_string(), concepts });
    }
    out
}
