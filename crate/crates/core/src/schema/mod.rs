//! Compiles GloSIS ontology modules into restriction profiles, codelists,
//! procedure schemes and documentation metadata.

mod codelist;
mod manifest;
mod metadata;
mod profile;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::rdf::vocab::{gsp, owl, qudt, rdf, rdfs, skos, sosa};
use crate::rdf::{Graph, Term};

pub use codelist::{CodeList, CodeListConcept, ProcedureConcept, ProcedureScheme};
pub use manifest::{load_manifest, read_manifest, ManifestEntry, ManifestError};
pub use metadata::MetadataRecord;
pub use profile::{Category, ClassExpr, ClassProfile, RestrictionKind, RestrictionSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("module <{0}> provided more than once")]
    DuplicateModule(String),
    #[error("class <{0}> is not declared in the catalog")]
    UnknownClass(String),
    #[error("module <{0}> is not loaded")]
    UnknownModule(String),
    #[error("restriction {node} on <{class}> cannot be decoded: {reason}")]
    UndecodableRestriction { class: String, node: Term, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogWarning {
    UnresolvedImport { module: String, import: String },
    Restriction(SchemaError),
}

impl std::fmt::Display for CatalogWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatalogWarning::UnresolvedImport { module, import } => {
                write!(f, "module <{module}> imports <{import}>, which is not loaded")
            }
            CatalogWarning::Restriction(e) => e.fmt(f),
        }
    }
}

/// Loaded ontology modules and everything extracted from them. Immutable
/// once built.
#[derive(Debug, Clone, Default)]
pub struct OntologyCatalog {
    modules: BTreeMap<String, Graph>,
    merged: Graph,
    warnings: Vec<CatalogWarning>,
    profiles: BTreeMap<String, ClassProfile>,
    codelists: Vec<CodeList>,
    procedures: Vec<ProcedureScheme>,
    /// Direct super-types per class: rdfs:subClassOf plus both directions
    /// of owl:equivalentClass.
    parents: BTreeMap<String, BTreeSet<String>>,
}

/// Builds a catalog from `(module IRI, graph)` pairs. Imports that are not
/// among the pairs become warnings; nothing is fetched.
pub fn load_catalog(modules: Vec<(String, Graph)>) -> Result<OntologyCatalog, SchemaError> {
    let mut cat = OntologyCatalog::default();
    for (iri, g) in modules {
        if cat.modules.contains_key(&iri) {
            return Err(SchemaError::DuplicateModule(iri));
        }
        cat.merged.merge(&g);
        cat.modules.insert(iri, g);
    }
    for (iri, g) in &cat.modules {
        let imports: BTreeSet<String> = g
            .matching(None, Some(&Term::iri(owl::IMPORTS)), None)
            .into_iter()
            .filter_map(|t| t.object.as_iri().map(str::to_string))
            .collect();
        for import in imports {
            if !cat.modules.contains_key(&import) {
                cat.warnings.push(CatalogWarning::UnresolvedImport { module: iri.clone(), import });
            }
        }
    }
    let g = &cat.merged;
    for t in g.matching(None, Some(&Term::iri(rdfs::SUB_CLASS_OF)), None) {
        if let (Some(c), Some(s)) = (t.subject.as_iri(), t.object.as_iri()) {
            cat.parents.entry(c.to_string()).or_default().insert(s.to_string());
        }
    }
    for t in g.matching(None, Some(&Term::iri(owl::EQUIVALENT_CLASS)), None) {
        if let (Some(a), Some(b)) = (t.subject.as_iri(), t.object.as_iri()) {
            cat.parents.entry(a.to_string()).or_default().insert(b.to_string());
            cat.parents.entry(b.to_string()).or_default().insert(a.to_string());
        }
    }
    let classes = cat.declared_classes();
    for class in classes {
        match cat.build_profile(&class) {
            Ok(p) => {
                cat.profiles.insert(class, p);
            }
            Err(e) => cat.warnings.push(CatalogWarning::Restriction(e)),
        }
    }
    cat.codelists = codelist::extract_codelists(&cat);
    cat.procedures = codelist::extract_procedures(&cat);
    Ok(cat)
}

impl OntologyCatalog {
    /// Union of all module graphs.
    pub fn graph(&self) -> &Graph {
        &self.merged
    }

    pub fn module(&self, iri: &str) -> Option<&Graph> {
        self.modules.get(iri)
    }

    pub fn modules(&self) -> impl Iterator<Item = (&str, &Graph)> {
        self.modules.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn warnings(&self) -> &[CatalogWarning] {
        &self.warnings
    }

    /// Modules reachable from `module` through owl:imports, itself included.
    pub fn import_closure(&self, module: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([module.to_string()]);
        while let Some(m) = queue.pop_front() {
            if !seen.insert(m.clone()) {
                continue;
            }
            if let Some(g) = self.modules.get(&m) {
                for t in g.matching(None, Some(&Term::iri(owl::IMPORTS)), None) {
                    if let Some(i) = t.object.as_iri() {
                        queue.push_back(i.to_string());
                    }
                }
            }
        }
        seen
    }

    /// Classes with an rdf:type owl:Class or rdfs:subClassOf statement.
    pub fn declared_classes(&self) -> BTreeSet<String> {
        let g = &self.merged;
        let mut out: BTreeSet<String> =
            g.instances_of(owl::CLASS).filter_map(Term::as_iri).map(str::to_string).collect();
        for t in g.matching(None, Some(&Term::iri(rdfs::SUB_CLASS_OF)), None) {
            if let Some(c) = t.subject.as_iri() {
                out.insert(c.to_string());
            }
        }
        out
    }

    pub fn is_declared(&self, class: &str) -> bool {
        let c = Term::iri(class);
        self.merged.has(&c, rdf::TYPE, &Term::iri(owl::CLASS)) || self.merged.object(&c, rdfs::SUB_CLASS_OF).is_some()
    }

    /// `class` and every class reachable through subclass and equivalence
    /// edges in the catalog.
    pub fn superclasses(&self, class: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([class.to_string()]);
        while let Some(c) = queue.pop_front() {
            if !seen.insert(c.clone()) {
                continue;
            }
            if let Some(ps) = self.parents.get(&c) {
                queue.extend(ps.iter().cloned());
            }
        }
        seen
    }

    pub fn is_subclass_of(&self, class: &str, ancestor: &str) -> bool {
        self.superclasses(class).contains(ancestor)
    }

    pub fn category(&self, class: &str) -> Category {
        let sup = self.superclasses(class);
        if sup.contains(skos::CONCEPT) {
            Category::Codelist
        } else if sup.contains(sosa::OBSERVATION) {
            Category::Observation
        } else if sup.contains(qudt::QUANTITY_VALUE) {
            Category::QuantityValue
        } else if sup.contains(gsp::FEATURE) {
            Category::SpatialObject
        } else {
            Category::Other
        }
    }

    fn build_profile(&self, class: &str) -> Result<ClassProfile, SchemaError> {
        let (superclasses, restrictions) = profile::decode_class(&self.merged, class)?;
        Ok(ClassProfile { class: class.to_string(), superclasses, restrictions, category: self.category(class) })
    }

    /// Decodes the restrictions asserted directly on `class`.
    pub fn extract_class_profile(&self, class: &str) -> Result<ClassProfile, SchemaError> {
        if !self.is_declared(class) {
            return Err(SchemaError::UnknownClass(class.to_string()));
        }
        match self.profiles.get(class) {
            Some(p) => Ok(p.clone()),
            None => self.build_profile(class),
        }
    }

    pub fn profile(&self, class: &str) -> Option<&ClassProfile> {
        self.profiles.get(class)
    }

    pub fn profiles(&self) -> impl Iterator<Item = &ClassProfile> {
        self.profiles.values()
    }

    /// Restrictions of `class` and all its superclasses, each paired with
    /// the class that declares it.
    pub fn effective_restrictions(&self, class: &str) -> Vec<(&str, &RestrictionSpec)> {
        let mut out = Vec::new();
        for c in self.superclasses(class) {
            if let Some((k, p)) = self.profiles.get_key_value(&c) {
                out.extend(p.restrictions.iter().map(|r| (k.as_str(), r)));
            }
        }
        out
    }

    pub fn codelists(&self) -> &[CodeList] {
        &self.codelists
    }

    pub fn codelist_for_class(&self, class: &str) -> Option<&CodeList> {
        self.codelists.iter().find(|c| c.class == class)
    }

    pub fn procedures(&self) -> &[ProcedureScheme] {
        &self.procedures
    }

    /// rdf:type values of `node` asserted in `data` or in the catalog,
    /// closed under the superclass relation.
    pub fn types_of(&self, data: &Graph, node: &Term) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in data.types(node).chain(self.merged.types(node)) {
            if let Some(iri) = t.as_iri() {
                out.extend(self.superclasses(iri));
            }
        }
        out
    }

    pub fn extract_metadata(&self, module: &str) -> Result<MetadataRecord, SchemaError> {
        let g = self.modules.get(module).ok_or_else(|| SchemaError::UnknownModule(module.to_string()))?;
        Ok(metadata::extract(g, module))
    }
}
