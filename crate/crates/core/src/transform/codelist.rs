use std::collections::{BTreeMap, BTreeSet};
use std::io;

use crate::rdf::vocab::{owl, rdf, rdfs, skos};
use crate::rdf::{write_list, Graph, PrefixMap, Term};
use crate::schema::load_catalog;

use super::TransformError;

/// One concept of a codelist in tabular form.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CodelistRow {
    pub scheme: String,
    pub class: String,
    pub notation: String,
    #[serde(rename = "prefLabel")]
    pub pref_label: String,
    pub definition: String,
    /// Provenance text attached as skos:definition of the scheme and class.
    pub source: String,
    /// Notation of the broader concept; empty for top concepts.
    #[serde(default)]
    pub broader: String,
}

/// Codelist name shown in labels: the class local name without a trailing
/// `Code`.
fn list_name(class: &str) -> &str {
    let local = class.rsplit(['/', '#']).next().unwrap_or(class);
    local.strip_suffix("Code").unwrap_or(local)
}

/// Builds the scheme, enumeration class and concepts for every scheme in
/// `rows`, in first-appearance order.
pub fn codelist_csv_to_rdf(rows: &[CodelistRow]) -> Result<Graph, TransformError> {
    let mut groups: Vec<(&str, Vec<&CodelistRow>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|(s, _)| *s == r.scheme) {
            Some((_, v)) => v.push(r),
            None => groups.push((&r.scheme, vec![r])),
        }
    }
    let mut g = Graph::new();
    let a = Term::iri(rdf::TYPE);
    for (scheme_iri, members) in groups {
        let mut seen = BTreeSet::new();
        for r in &members {
            if r.notation.is_empty() {
                return Err(TransformError::Pattern { codelist: r.class.clone(), message: "empty notation".into() });
            }
            if !seen.insert(r.notation.as_str()) {
                return Err(TransformError::DuplicateNotation {
                    scheme: scheme_iri.into(),
                    notation: r.notation.clone(),
                });
            }
        }
        for r in &members {
            if !r.broader.is_empty() && !seen.contains(r.broader.as_str()) {
                return Err(TransformError::UnknownBroader { scheme: scheme_iri.into(), notation: r.broader.clone() });
            }
        }
        let first = members[0];
        let scheme = Term::iri(scheme_iri);
        let class = Term::iri(&first.class);
        let name = list_name(&first.class);
        let concept_iri = |notation: &str| Term::iri(format!("{scheme_iri}-{notation}"));

        let scheme_label = Term::lang(format!("Code list for {name} - codelist scheme"), "en");
        let note = Term::lang(format!("This code list provides the {name}."), "en");
        g.add(scheme.clone(), a.clone(), Term::iri(skos::CONCEPT_SCHEME));
        g.add(scheme.clone(), Term::iri(skos::PREF_LABEL), scheme_label.clone());
        g.add(scheme.clone(), Term::iri(rdfs::LABEL), scheme_label);
        g.add(scheme.clone(), Term::iri(skos::NOTE), note.clone());
        g.add(scheme.clone(), Term::iri(rdfs::SEE_ALSO), class.clone());

        g.add(class.clone(), a.clone(), Term::iri(owl::CLASS));
        g.add(class.clone(), Term::iri(rdfs::SUB_CLASS_OF), Term::iri(skos::CONCEPT));
        g.add(
            class.clone(),
            Term::iri(rdfs::LABEL),
            Term::lang(format!("Code list for {name} - codelist class"), "en"),
        );
        g.add(class.clone(), Term::iri(rdfs::COMMENT), note);
        g.add(class.clone(), Term::iri(rdfs::SEE_ALSO), scheme.clone());
        if !first.source.is_empty() {
            g.add(scheme.clone(), Term::iri(skos::DEFINITION), Term::literal(&first.source));
            g.add(class.clone(), Term::iri(skos::DEFINITION), Term::literal(&first.source));
        }
        let items: Vec<Term> = members.iter().map(|r| concept_iri(&r.notation)).collect();
        let head = write_list(&mut g, &items);
        g.add(class.clone(), Term::iri(owl::ONE_OF), head);

        for r in members {
            let c = concept_iri(&r.notation);
            g.add(c.clone(), a.clone(), Term::iri(skos::CONCEPT));
            g.add(c.clone(), a.clone(), class.clone());
            if r.broader.is_empty() {
                g.add(c.clone(), Term::iri(skos::TOP_CONCEPT_OF), scheme.clone());
            } else {
                g.add(c.clone(), Term::iri(skos::BROADER), concept_iri(&r.broader));
            }
            g.add(c.clone(), Term::iri(skos::PREF_LABEL), Term::lang(&r.pref_label, "en"));
            g.add(c.clone(), Term::iri(skos::NOTATION), Term::literal(&r.notation));
            if !r.definition.is_empty() {
                g.add(c.clone(), Term::iri(skos::DEFINITION), Term::literal(&r.definition));
            }
            g.add(c, Term::iri(skos::IN_SCHEME), scheme.clone());
        }
    }
    let mut prefixes = PrefixMap::with_well_known();
    prefixes.insert("glosis_cl", "http://w3id.org/glosis/model/codelists/");
    g.set_prefixes(prefixes);
    Ok(g)
}

/// Rows recovered from a codelist graph, plus warnings for codelists that
/// only partly fit the tabular form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodelistExport {
    pub rows: Vec<CodelistRow>,
    pub warnings: Vec<String>,
}

/// Inverse of [`codelist_csv_to_rdf`]. Enumeration order is kept for closed
/// codelists; open ones are listed in IRI order with a warning.
pub fn codelist_rdf_to_csv(graph: &Graph) -> Result<CodelistExport, TransformError> {
    let cat = load_catalog(vec![("urn:glosis:codelists".into(), graph.clone())])
        .expect("a single module cannot be duplicated");
    let mut out = CodelistExport::default();
    for cl in cat.codelists() {
        if !cl.closed {
            out.warnings.push(format!("<{}> has no owl:oneOf enumeration; rows are in IRI order", cl.class));
        }
        let extra: Vec<&Term> = graph
            .objects(&Term::iri(&cl.class), rdfs::SUB_CLASS_OF)
            .filter(|t| t.as_iri() != Some(skos::CONCEPT))
            .collect();
        if !extra.is_empty() {
            out.warnings.push(format!("superclasses of <{}> other than skos:Concept are not exported", cl.class));
        }
        if cl.concepts.is_empty() {
            out.warnings.push(format!("<{}> has no concepts", cl.class));
        }
        let scheme = Term::iri(&cl.scheme);
        let source = graph
            .object(&scheme, skos::DEFINITION)
            .or_else(|| graph.object(&Term::iri(&cl.class), skos::DEFINITION))
            .map(|t| t.value().to_string())
            .unwrap_or_default();
        let notations: BTreeMap<&str, &str> =
            cl.concepts.iter().filter_map(|c| c.notation.as_deref().map(|n| (c.iri.as_str(), n))).collect();
        for c in &cl.concepts {
            let notation = c.notation.clone().ok_or_else(|| TransformError::Pattern {
                codelist: cl.class.clone(),
                message: format!("concept <{}> has no skos:notation", c.iri),
            })?;
            let broader = match &c.broader {
                None => String::new(),
                Some(b) => notations.get(b.as_str()).map(|n| n.to_string()).ok_or_else(|| TransformError::Pattern {
                    codelist: cl.class.clone(),
                    message: format!("broader concept <{b}> is not in the codelist"),
                })?,
            };
            out.rows.push(CodelistRow {
                scheme: cl.scheme.clone(),
                class: cl.class.clone(),
                notation,
                pref_label: c.pref_label.clone().unwrap_or_default(),
                definition: c.definition.clone().unwrap_or_default(),
                source: source.clone(),
                broader,
            });
        }
    }
    Ok(out)
}

pub fn read_codelist_csv(reader: impl io::Read) -> Result<Vec<CodelistRow>, TransformError> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(TransformError::from)).collect()
}

pub fn write_codelist_csv(rows: &[CodelistRow], writer: impl io::Write) -> Result<(), TransformError> {
    let mut w = csv::Writer::from_writer(writer);
    if rows.is_empty() {
        w.write_record(["scheme", "class", "notation", "prefLabel", "definition", "source", "broader"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| TransformError::Csv(e.into()))?;
    Ok(())
}
