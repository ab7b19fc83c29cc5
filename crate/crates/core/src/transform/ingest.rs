use std::collections::{BTreeMap, BTreeSet};
use std::io;

use serde::Deserialize;

use crate::rdf::vocab::{gsp, iso28258, qudt, rdf, rdfs, sosa, xsd};
use crate::rdf::{Graph, PrefixMap, Term};

use super::{resolve_iri, TransformError};

/// A CSV table: header plus rows of equal width.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(reader: impl io::Read) -> Result<Table, TransformError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers()?.iter().map(str::to_string).collect();
        let rows =
            rdr.records().map(|r| r.map(|rec| rec.iter().map(str::to_string).collect())).collect::<Result<_, _>>()?;
        Ok(Table { header, rows })
    }

    pub fn row_table(&self, index: usize) -> Table {
        Table { header: self.header.clone(), rows: vec![self.rows[index].clone()] }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BadNumberPolicy {
    /// Drop only the observation whose cell failed to parse.
    #[default]
    SkipCell,
    /// Drop every triple produced by the row.
    SkipRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureTarget {
    Site,
    Profile,
    Layer,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkMapping {
    pub predicate: String,
    /// IRI template for the object.
    pub object: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralMapping {
    pub predicate: String,
    pub value: String,
    #[serde(default)]
    pub datatype: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureMapping {
    pub iri: String,
    pub class: String,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteMapping {
    pub iri: String,
    pub class: String,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub links: Vec<LinkMapping>,
    #[serde(default)]
    pub literals: Vec<LiteralMapping>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryMapping {
    pub iri: String,
    /// WKT template, e.g. `POINT({lon} {lat})` or `{wkt}`.
    pub wkt: String,
    /// Type the literal as gsp:wktLiteral instead of a plain string.
    #[serde(default)]
    pub typed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ResultMapping {
    Quantity {
        iri: String,
        #[serde(default)]
        class: Option<String>,
        #[serde(default)]
        label: Option<String>,
        unit: String,
        #[serde(default)]
        datatype: Option<String>,
    },
    Concept {
        /// IRI template of the result concept, usually built from `{value}`.
        iri: String,
    },
    Simple {
        #[serde(default)]
        datatype: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationMapping {
    pub column: String,
    pub iri: String,
    pub class: String,
    #[serde(default)]
    pub label: Option<String>,
    pub target: FeatureTarget,
    pub observed_property: String,
    #[serde(default)]
    pub procedure: Option<String>,
    pub result: ResultMapping,
}

/// How one survey table maps onto GloSIS sites, profiles, layers and
/// observations. Templates substitute `{column}` with the row's cell,
/// `{id}` with the expanded id template and `{value}` with the
/// observation's own cell. Relative IRIs resolve against `base`; prefixed
/// names expand through `prefixes`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingConfig {
    pub base: String,
    #[serde(default)]
    pub prefixes: BTreeMap<String, String>,
    pub id: String,
    pub site: SiteMapping,
    #[serde(default)]
    pub geometry: Option<GeometryMapping>,
    #[serde(default)]
    pub profile: Option<FeatureMapping>,
    #[serde(default)]
    pub layer: Option<FeatureMapping>,
    #[serde(default)]
    pub observations: Vec<ObservationMapping>,
    #[serde(default)]
    pub on_bad_number: BadNumberPolicy,
}

impl MappingConfig {
    pub fn from_json(text: &str) -> Result<MappingConfig, TransformError> {
        serde_json::from_str(text).map_err(|e| TransformError::Mapping(e.to_string()))
    }

    fn prefix_map(&self) -> PrefixMap {
        let mut p = PrefixMap::with_well_known();
        for (k, v) in &self.prefixes {
            p.insert(k.clone(), v.clone());
        }
        p
    }

    /// Every `(template, needs id)` pair naming a node, for header checks.
    fn templates(&self) -> Vec<(&str, bool)> {
        let mut out = vec![(self.id.as_str(), false), (self.site.iri.as_str(), true)];
        out.extend(self.site.label.as_deref().map(|l| (l, false)));
        out.extend(self.site.links.iter().map(|l| (l.object.as_str(), false)));
        out.extend(self.site.literals.iter().map(|l| (l.value.as_str(), false)));
        if let Some(g) = &self.geometry {
            out.push((&g.iri, true));
            out.push((&g.wkt, false));
        }
        for f in [&self.profile, &self.layer].into_iter().flatten() {
            out.push((&f.iri, true));
            out.extend(f.label.as_deref().map(|l| (l, false)));
        }
        for o in &self.observations {
            out.push((&o.iri, true));
            out.extend(o.label.as_deref().map(|l| (l, false)));
            match &o.result {
                ResultMapping::Quantity { iri, label, .. } => {
                    out.push((iri, true));
                    out.extend(label.as_deref().map(|l| (l, false)));
                }
                ResultMapping::Concept { iri } => out.push((iri, false)),
                ResultMapping::Simple { .. } => {}
            }
        }
        out
    }

    /// Checks template syntax, that node IRI templates contain `{id}`, that
    /// observation targets exist and that every referenced column is in
    /// `header`.
    pub fn check(&self, header: &[String]) -> Result<(), TransformError> {
        let columns: BTreeSet<&str> = header.iter().map(String::as_str).collect();
        let mut referenced: Vec<String> = self.observations.iter().map(|o| o.column.clone()).collect();
        for (template, needs_id) in self.templates() {
            let names = placeholders(template).map_err(TransformError::Mapping)?;
            if needs_id && !names.iter().any(|n| n == "id") {
                return Err(TransformError::Mapping(format!("IRI template {template:?} lacks {{id}}")));
            }
            referenced.extend(names.into_iter().filter(|n| n != "id" && n != "value"));
        }
        if placeholders(&self.id).map_err(TransformError::Mapping)?.iter().any(|n| n == "id" || n == "value") {
            return Err(TransformError::Mapping("the id template may only reference columns".into()));
        }
        for c in referenced {
            if !columns.contains(c.as_str()) {
                return Err(TransformError::Mapping(format!("column {c:?} is not in the table header")));
            }
        }
        for o in &self.observations {
            let present = match o.target {
                FeatureTarget::Site => true,
                FeatureTarget::Profile => self.profile.is_some(),
                FeatureTarget::Layer => self.layer.is_some(),
            };
            if !present {
                return Err(TransformError::Mapping(format!(
                    "observation for column {:?} targets a feature the mapping does not emit",
                    o.column
                )));
            }
        }
        oxiri::Iri::parse(self.base.clone()).map_err(|e| TransformError::Mapping(format!("base: {e}")))?;
        let prefixes = self.prefix_map();
        let mut names: Vec<&str> = vec![&self.site.class];
        names.extend(self.site.links.iter().map(|l| l.predicate.as_str()));
        names.extend(self.site.literals.iter().map(|l| l.predicate.as_str()));
        names.extend(self.site.literals.iter().filter_map(|l| l.datatype.as_deref()));
        names.extend([&self.profile, &self.layer].into_iter().flatten().map(|f| f.class.as_str()));
        for o in &self.observations {
            names.extend([o.class.as_str(), o.observed_property.as_str()]);
            names.extend(o.procedure.as_deref());
            if let ResultMapping::Quantity { class, unit, datatype, .. } = &o.result {
                names.extend(class.as_deref());
                names.push(unit);
                names.extend(datatype.as_deref());
            }
            if let ResultMapping::Simple { datatype: Some(d) } = &o.result {
                names.push(d);
            }
        }
        for n in names {
            expand(&prefixes, n).map_err(TransformError::Mapping)?;
        }
        Ok(())
    }
}

/// Placeholder names in `template`, in order.
fn placeholders(template: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut rest = template;
    while let Some(i) = rest.find(['{', '}']) {
        if rest.as_bytes()[i] == b'}' {
            return Err(format!("unbalanced '}}' in template {template:?}"));
        }
        let after = &rest[i + 1..];
        let end = after.find('}').ok_or_else(|| format!("unclosed '{{' in template {template:?}"))?;
        let name = &after[..end];
        if name.is_empty() || name.contains('{') {
            return Err(format!("bad placeholder in template {template:?}"));
        }
        out.push(name.to_string());
        rest = &after[end + 1..];
    }
    Ok(out)
}

/// Fills `template`; `None` when a referenced cell is empty.
fn fill(template: &str, lookup: &dyn Fn(&str) -> Option<String>) -> Option<String> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(i) = rest.find('{') {
        out.push_str(&rest[..i]);
        let after = &rest[i + 1..];
        let end = after.find('}').expect("templates are checked before use");
        let value = lookup(&after[..end])?;
        if value.is_empty() {
            return None;
        }
        out.push_str(&value);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    Some(out)
}

/// Expands a prefixed name or an absolute IRI.
fn expand(prefixes: &PrefixMap, name: &str) -> Result<String, String> {
    if let Some(iri) = prefixes.expand(name) {
        return Ok(iri);
    }
    resolve_iri(None, name).map_err(|_| format!("{name:?} is neither a known prefixed name nor an absolute IRI"))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IngestFinding {
    /// Zero-based data row index.
    pub row: usize,
    pub column: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestOutput {
    pub graph: Graph,
    pub findings: Vec<IngestFinding>,
}

/// Reads a CSV table and ingests it with `mapping`.
pub fn ingest_csv(reader: impl io::Read, mapping: &MappingConfig) -> Result<IngestOutput, TransformError> {
    ingest_table(&Table::read(reader)?, mapping)
}

pub fn ingest_table(table: &Table, mapping: &MappingConfig) -> Result<IngestOutput, TransformError> {
    mapping.check(&table.header)?;
    let prefixes = mapping.prefix_map();
    let base = oxiri::Iri::parse(mapping.base.clone()).expect("base checked");
    let column_index: BTreeMap<&str, usize> = table.header.iter().enumerate().map(|(i, h)| (h.as_str(), i)).collect();
    let mut out = IngestOutput::default();
    for (index, row) in table.rows.iter().enumerate() {
        let ctx = RowContext { index, row, column_index: &column_index, prefixes: &prefixes, base: &base };
        match ctx.emit(mapping) {
            Ok((triples, findings)) => {
                out.graph.extend(triples);
                out.findings.extend(findings);
            }
            Err(f) => out.findings.push(f),
        }
    }
    let mut p = PrefixMap::new();
    for (k, v) in &mapping.prefixes {
        p.insert(k.clone(), v.clone());
    }
    for (k, v) in PrefixMap::with_well_known().iter() {
        if p.get(k).is_none() {
            p.insert(k, v);
        }
    }
    out.graph.set_prefixes(p);
    Ok(out)
}

struct RowContext<'a> {
    index: usize,
    row: &'a [String],
    column_index: &'a BTreeMap<&'a str, usize>,
    prefixes: &'a PrefixMap,
    base: &'a oxiri::Iri<String>,
}

type RowTriples = Vec<crate::rdf::Triple>;

impl RowContext<'_> {
    fn cell(&self, column: &str) -> Option<String> {
        self.column_index.get(column).map(|&i| self.row.get(i).map(|c| c.trim().to_string()).unwrap_or_default())
    }

    fn finding(&self, column: Option<&str>, message: String) -> IngestFinding {
        IngestFinding { row: self.index, column: column.map(str::to_string), message }
    }

    fn fill(&self, template: &str, id: &str, value: Option<&str>) -> Option<String> {
        fill(template, &|name| match name {
            "id" => Some(id.to_string()),
            "value" => value.map(str::to_string),
            c => self.cell(c),
        })
    }

    fn iri(&self, filled: &str) -> Result<Term, IngestFinding> {
        if let Some(iri) = self.prefixes.expand(filled) {
            return Ok(Term::iri(iri));
        }
        resolve_iri(Some(self.base), filled)
            .map(Term::iri)
            .map_err(|e| self.finding(None, format!("invalid IRI {filled:?}: {e}")))
    }

    /// IRI for a node template; an empty referenced cell is a row error.
    fn node(&self, template: &str, id: &str) -> Result<Term, IngestFinding> {
        let filled = self
            .fill(template, id, None)
            .ok_or_else(|| self.finding(None, format!("template {template:?} references an empty cell")))?;
        self.iri(&filled)
    }

    /// Expanded datatype IRI, xsd:float when unspecified.
    fn datatype(&self, name: Option<&str>) -> String {
        name.map(|d| self.name(d).value().to_string()).unwrap_or_else(|| xsd::FLOAT.to_string())
    }

    fn name(&self, name: &str) -> Term {
        Term::iri(expand(self.prefixes, name).expect("names checked"))
    }

    fn emit(&self, m: &MappingConfig) -> Result<(RowTriples, Vec<IngestFinding>), IngestFinding> {
        let id = self.fill(&m.id, "", None).ok_or_else(|| self.finding(None, "id columns are empty".into()))?;
        let mut t = Vec::new();
        let mut findings = Vec::new();
        let mut add = |s: &Term, p: Term, o: Term| t.push(crate::rdf::Triple::new(s.clone(), p, o));
        let a = || Term::iri(rdf::TYPE);
        let label = |tpl: &Option<String>, value: Option<&str>| {
            tpl.as_deref().and_then(|l| self.fill(l, &id, value)).map(Term::literal)
        };

        let site = self.node(&m.site.iri, &id)?;
        add(&site, a(), self.name(&m.site.class));
        if let Some(l) = label(&m.site.label, None) {
            add(&site, Term::iri(rdfs::LABEL), l);
        }
        for link in &m.site.links {
            if let Some(filled) = self.fill(&link.object, &id, None) {
                add(&site, self.name(&link.predicate), self.iri(&filled)?);
            }
        }
        for lit in &m.site.literals {
            if let Some(v) = self.fill(&lit.value, &id, None) {
                let o = match &lit.datatype {
                    Some(d) => Term::typed(v, self.name(d).value()),
                    None => Term::literal(v),
                };
                add(&site, self.name(&lit.predicate), o);
            }
        }
        if let Some(g) = &m.geometry {
            if let Some(wkt) = self.fill(&g.wkt, &id, None) {
                if let Err(e) = crate::geo::parse_wkt(&wkt) {
                    return Err(self.finding(None, format!("geometry {wkt:?}: {e}")));
                }
                let geom = self.node(&g.iri, &id)?;
                add(&site, Term::iri(gsp::HAS_GEOMETRY), geom.clone());
                add(&geom, a(), Term::iri(gsp::GEOMETRY));
                let lit = if g.typed { Term::typed(wkt, gsp::WKT_LITERAL) } else { Term::literal(wkt) };
                add(&geom, Term::iri(gsp::AS_WKT), lit);
            }
        }
        let mut feature = |f: &Option<FeatureMapping>| -> Result<Option<Term>, IngestFinding> {
            let Some(f) = f else { return Ok(None) };
            let node = self.node(&f.iri, &id)?;
            add(&node, a(), self.name(&f.class));
            if let Some(l) = label(&f.label, None) {
                add(&node, Term::iri(rdfs::LABEL), l);
            }
            Ok(Some(node))
        };
        let profile = feature(&m.profile)?;
        let layer = feature(&m.layer)?;
        if let Some(p) = &profile {
            add(&site, Term::iri(iso28258::SITE_TYPICAL_PROFILE), p.clone());
            if let Some(l) = &layer {
                add(p, Term::iri(iso28258::PROFILE_ELEMENT), l.clone());
            }
        }

        for o in &m.observations {
            let value = self.cell(&o.column).unwrap_or_default();
            if value.is_empty() {
                continue;
            }
            let target = match o.target {
                FeatureTarget::Site => &site,
                FeatureTarget::Profile => profile.as_ref().expect("target checked"),
                FeatureTarget::Layer => layer.as_ref().expect("target checked"),
            };
            let checked = match &o.result {
                ResultMapping::Concept { .. } => None,
                ResultMapping::Quantity { datatype, .. } => Some(self.datatype(datatype.as_deref())),
                ResultMapping::Simple { datatype } => datatype.as_deref().map(|d| self.datatype(Some(d))),
            };
            if let Some(dt) = &checked {
                if !crate::validate::lexical_valid(&value, dt) {
                    let f = self.finding(Some(&o.column), format!("{value:?} is not a valid <{dt}>"));
                    match m.on_bad_number {
                        BadNumberPolicy::SkipCell => {
                            findings.push(f);
                            continue;
                        }
                        BadNumberPolicy::SkipRow => return Err(f),
                    }
                }
            }
            let obs = self.node(&o.iri, &id)?;
            add(&obs, a(), self.name(&o.class));
            if let Some(l) = label(&o.label, Some(&value)) {
                add(&obs, Term::iri(rdfs::LABEL), l);
            }
            add(&obs, Term::iri(sosa::HAS_FEATURE_OF_INTEREST), target.clone());
            add(&obs, Term::iri(sosa::OBSERVED_PROPERTY), self.name(&o.observed_property));
            if let Some(p) = &o.procedure {
                add(&obs, Term::iri(sosa::USED_PROCEDURE), self.name(p));
            }
            match &o.result {
                ResultMapping::Quantity { iri, class, label: result_label, unit, datatype } => {
                    let node = self.node(iri, &id)?;
                    add(&obs, Term::iri(sosa::HAS_RESULT), node.clone());
                    if let Some(c) = class {
                        add(&node, a(), self.name(c));
                    }
                    if let Some(l) = label(result_label, Some(&value)) {
                        add(&node, Term::iri(rdfs::LABEL), l);
                    }
                    add(
                        &node,
                        Term::iri(qudt::NUMERIC_VALUE),
                        Term::typed(value.clone(), self.datatype(datatype.as_deref())),
                    );
                    add(&node, Term::iri(qudt::UNIT), self.name(unit));
                }
                ResultMapping::Concept { iri } => {
                    let filled = self.fill(iri, &id, Some(&value)).expect("value cell is non-empty");
                    add(&obs, Term::iri(sosa::HAS_RESULT), self.iri(&filled)?);
                }
                ResultMapping::Simple { .. } => {
                    let lit = match checked {
                        Some(dt) => Term::typed(value.clone(), dt),
                        None => Term::literal(value.clone()),
                    };
                    add(&obs, Term::iri(sosa::HAS_SIMPLE_RESULT), lit);
                }
            }
        }
        Ok((t, findings))
    }
}
