//! Maintenance and ETL tooling: codelist CSV/RDF conversion, mapping-driven
//! ingestion of survey tables and the module version bump.

mod codelist;
mod ingest;
mod version;

pub use codelist::{
    codelist_csv_to_rdf, codelist_rdf_to_csv, read_codelist_csv, write_codelist_csv, CodelistExport, CodelistRow,
};
pub use ingest::{
    ingest_csv, ingest_table, BadNumberPolicy, FeatureMapping, FeatureTarget, GeometryMapping, IngestFinding,
    IngestOutput, LinkMapping, LiteralMapping, MappingConfig, ObservationMapping, ResultMapping, SiteMapping, Table,
};
pub use version::{bump_version, VersionPart, VersionSpec};

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error("notation {notation:?} appears more than once in scheme <{scheme}>")]
    DuplicateNotation { scheme: String, notation: String },
    #[error("broader notation {notation:?} is not defined in scheme <{scheme}>")]
    UnknownBroader { scheme: String, notation: String },
    #[error("codelist <{codelist}>: {message}")]
    Pattern { codelist: String, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("mapping: {0}")]
    Mapping(String),
    #[error("module <{module}>: {message}")]
    Version { module: String, message: String },
}

/// Absolute IRI for `raw`: kept when it already has a scheme, otherwise
/// resolved against `base`.
pub(crate) fn resolve_iri(base: Option<&oxiri::Iri<String>>, raw: &str) -> Result<String, String> {
    let has_scheme = raw.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && raw.find(':').is_some_and(|i| raw[..i].chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)));
    if has_scheme {
        return oxiri::Iri::parse(raw.to_string()).map(|i| i.into_inner()).map_err(|e| e.to_string());
    }
    match base {
        Some(b) => b.resolve(raw).map(|i| i.into_inner()).map_err(|e| e.to_string()),
        None => Err(format!("relative IRI {raw:?} with no base")),
    }
}
