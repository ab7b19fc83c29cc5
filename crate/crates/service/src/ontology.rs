use std::collections::BTreeSet;
use std::fmt::Write;

use glosis_core::rdf::vocab::{rdfs, skos};
use glosis_core::rdf::{serialize_turtle, PrefixMap, Term};
use glosis_core::schema::OntologyCatalog;

/// A module document, optionally pointing at one term in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub module: String,
    pub anchor: Option<String>,
}

/// Finds the module that documents `iri`: the module itself, the module
/// defining the term, or for codelist and procedure concepts the module of
/// their scheme.
pub fn resolve(catalog: &OntologyCatalog, iri: &str) -> Option<Resource> {
    if catalog.module(iri).is_some() {
        return Some(Resource { module: iri.into(), anchor: None });
    }
    let anchor = Some(local_name(iri).to_string());
    let scheme = catalog
        .codelists()
        .iter()
        .find(|c| c.contains(iri))
        .map(|c| c.scheme.as_str())
        .or_else(|| catalog.procedures().iter().find(|s| s.concept(iri).is_some()).map(|s| s.scheme.as_str()));
    if let Some(module) = scheme.and_then(|s| defining_module(catalog, s)) {
        return Some(Resource { module, anchor });
    }
    if let Some(module) = defining_module(catalog, iri) {
        return Some(Resource { module, anchor });
    }
    // A hash namespace such as `.../iso28258/2013` names the module of its terms.
    let prefix = format!("{iri}#");
    catalog
        .modules()
        .find(|(_, g)| g.subject_terms().any(|s| s.as_iri().is_some_and(|s| s.starts_with(&prefix))))
        .map(|(m, _)| Resource { module: m.into(), anchor: None })
}

fn defining_module(catalog: &OntologyCatalog, iri: &str) -> Option<String> {
    let term = Term::iri(iri);
    catalog.modules().find(|(_, g)| !g.matching(Some(&term), None, None).is_empty()).map(|(m, _)| m.to_string())
}

fn local_name(iri: &str) -> &str {
    iri.rsplit(['#', '/']).next().unwrap_or(iri)
}

/// Whether the Accept header asks for HTML before any RDF syntax.
/// Wildcards alone select Turtle.
pub fn prefers_html(accept: Option<&str>) -> bool {
    let Some(accept) = accept else { return false };
    let mut html = 0.0f32;
    let mut rdf = 0.0f32;
    for range in accept.split(',') {
        let mut parts = range.split(';');
        let media = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let q =
            parts.filter_map(|p| p.trim().strip_prefix("q=")).find_map(|q| q.trim().parse::<f32>().ok()).unwrap_or(1.0);
        match media.as_str() {
            "text/html" | "application/xhtml+xml" => html = html.max(q),
            "text/turtle" | "application/x-turtle" | "application/rdf+xml" | "application/n-triples" => {
                rdf = rdf.max(q)
            }
            _ => {}
        }
    }
    html > 0.0 && html >= rdf
}

/// The module's Turtle, with the prefixes it was written with.
pub fn module_turtle(catalog: &OntologyCatalog, module: &str) -> Option<String> {
    let g = catalog.module(module)?;
    let prefixes = if g.prefixes().is_empty() { PrefixMap::with_well_known() } else { g.prefixes().clone() };
    Some(serialize_turtle(g, &prefixes))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// Landing page of a module: its metadata and one anchored entry per term.
pub fn module_html(catalog: &OntologyCatalog, resource: &Resource) -> Option<String> {
    let g = catalog.module(&resource.module)?;
    let meta = catalog.extract_metadata(&resource.module).ok()?;
    let title = meta.title.clone().unwrap_or_else(|| resource.module.clone());
    let mut page = String::new();
    let _ = write!(
        page,
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n</head>\n<body>\n<h1>{}</h1>\n<dl>\n",
        escape(&title),
        escape(&title)
    );
    let mut field = |name: &str, values: &[String]| {
        if !values.is_empty() {
            let _ = writeln!(page, "<dt>{name}</dt><dd>{}</dd>", escape(&values.join(", ")));
        }
    };
    field("IRI", std::slice::from_ref(&meta.module));
    field("Version", meta.version_info.as_slice());
    field("Version IRI", meta.version_iri.as_slice());
    field("Creators", &meta.creators);
    field("Contributors", &meta.contributors);
    field("Affiliations", &meta.affiliations);
    field("License", meta.license.as_slice());
    page.push_str("</dl>\n<h2>Terms</h2>\n<ul>\n");
    let terms: BTreeSet<&Term> =
        g.subject_terms().filter(|s| s.as_iri().is_some_and(|i| i != resource.module)).collect();
    for t in terms {
        let iri = t.value();
        let label = g
            .object(t, rdfs::LABEL)
            .or_else(|| g.object(t, skos::PREF_LABEL))
            .map(|l| l.value().to_string())
            .unwrap_or_else(|| local_name(iri).to_string());
        let id = escape(local_name(iri));
        let _ = writeln!(
            page,
            "<li id=\"{id}\"><a href=\"#{id}\">{}</a> <code>{}</code></li>",
            escape(&label),
            escape(iri)
        );
    }
    page.push_str("</ul>\n");
    if let Some(anchor) = &resource.anchor {
        let _ = writeln!(page, "<p>Requested term: <a href=\"#{0}\">{0}</a></p>", escape(anchor));
    }
    page.push_str("</body>\n</html>\n");
    Some(page)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accept_negotiation() {
        assert!(prefers_html(Some("text/html,application/xhtml+xml,*/*;q=0.8")));
        assert!(!prefers_html(Some("*/*")));
        assert!(!prefers_html(Some("text/turtle, text/html;q=0.5")));
        assert!(!prefers_html(Some("text/html;q=0")));
        assert!(!prefers_html(None));
    }

    #[test]
    fn html_is_escaped() {
        assert_eq!(escape("<a href=\"x\">&</a>"), "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;");
    }
}
