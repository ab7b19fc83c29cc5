use crate::rdf::vocab::{dcterms, foaf, owl, rdf, schema_org};
use crate::rdf::{Graph, Term};

/// Documentation metadata of one ontology module. Absent fields are empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct MetadataRecord {
    pub module: String,
    pub title: Option<String>,
    pub version_info: Option<String>,
    pub version_iri: Option<String>,
    pub creators: Vec<String>,
    pub contributors: Vec<String>,
    pub affiliations: Vec<String>,
    pub license: Option<String>,
}

fn name_of(g: &Graph, node: &Term) -> Option<String> {
    match node {
        Term::Literal(l) => Some(l.lexical().to_string()),
        _ => g
            .object(node, foaf::NAME)
            .or_else(|| g.object(node, schema_org::NAME))
            .map(|t| t.value().to_string())
            .or_else(|| node.as_iri().map(str::to_string)),
    }
}

fn push_unique(v: &mut Vec<String>, s: String) {
    if !v.contains(&s) {
        v.push(s);
    }
}

pub(super) fn extract(g: &Graph, module: &str) -> MetadataRecord {
    let mut subject = Term::iri(module);
    if !g.has(&subject, rdf::TYPE, &Term::iri(owl::ONTOLOGY)) {
        if let Some(s) = g.instances_of(owl::ONTOLOGY).next() {
            subject = s.clone();
        }
    }
    let text = |p: &str| g.object(&subject, p).map(|t| t.value().to_string());
    let mut rec = MetadataRecord {
        module: module.to_string(),
        title: text(dcterms::TITLE),
        version_info: text(owl::VERSION_INFO),
        version_iri: text(owl::VERSION_IRI),
        license: text(dcterms::LICENSE),
        ..Default::default()
    };
    for (pred, names) in [(dcterms::CREATOR, &mut rec.creators), (dcterms::CONTRIBUTOR, &mut rec.contributors)] {
        for agent in g.objects(&subject, pred) {
            if let Some(n) = name_of(g, agent) {
                push_unique(names, n);
            }
            for aff in g.objects(agent, schema_org::AFFILIATION) {
                if let Some(n) = name_of(g, aff) {
                    push_unique(&mut rec.affiliations, n);
                }
            }
        }
    }
    rec
}
