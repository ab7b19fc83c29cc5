use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::ServiceError;

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";
pub const DEFAULT_ONTOLOGY_BASE: &str = "http://w3id.org/glosis/model/";
pub const DEFAULT_PROPERTY_SCHEME: &str = "http://w3id.org/glosis/model/codelists/physioChemicalPropertyCode";

/// Service configuration, read from TOML. Relative paths are resolved
/// against the directory of the configuration file.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    #[serde(default = "default_bind")]
    pub bind: String,
    /// Turtle files merged into the default graph.
    #[serde(default)]
    pub data: Vec<PathBuf>,
    /// Ontology manifest, one `IRI<TAB>path` per line.
    #[serde(default)]
    pub manifest: Option<PathBuf>,
    /// Directory of `*.rq` REST method templates.
    #[serde(default)]
    pub templates: Option<PathBuf>,
    /// Remote SPARQL endpoints by name. SERVICE blocks may only name these.
    #[serde(default)]
    pub endpoints: BTreeMap<String, String>,
    /// Refuse to load data with validation errors.
    #[serde(default)]
    pub strict: bool,
    /// Failing SERVICE blocks contribute no rows instead of failing the query.
    #[serde(default)]
    pub lenient_services: bool,
    /// IRI prefix mapped onto `/ontology/`.
    #[serde(default = "default_ontology_base")]
    pub ontology_base: String,
    /// Concept scheme enumerating the `property` parameter kind.
    #[serde(default = "default_property_scheme")]
    pub property_scheme: String,
}

fn default_bind() -> String {
    DEFAULT_BIND.into()
}

fn default_ontology_base() -> String {
    DEFAULT_ONTOLOGY_BASE.into()
}

fn default_property_scheme() -> String {
    DEFAULT_PROPERTY_SCHEME.into()
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            bind: default_bind(),
            data: Vec::new(),
            manifest: None,
            templates: None,
            endpoints: BTreeMap::new(),
            strict: false,
            lenient_services: false,
            ontology_base: default_ontology_base(),
            property_scheme: default_property_scheme(),
        }
    }
}

impl EndpointConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<EndpointConfig, ServiceError> {
        let mut config: EndpointConfig = toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))?;
        let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base_dir.join(p) };
        config.data = config.data.iter().map(resolve).collect();
        config.manifest = config.manifest.as_ref().map(resolve);
        config.templates = config.templates.as_ref().map(resolve);
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<EndpointConfig, ServiceError> {
        let text = fs::read_to_string(path).map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))?;
        EndpointConfig::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths_follow_the_config_file() {
        let c = EndpointConfig::from_toml(
            "data = [\"a.ttl\", \"/abs/b.ttl\"]\nmanifest = \"m.manifest\"\n[endpoints]\nisric = \"http://x/sparql\"\n",
            Path::new("/etc/glosis"),
        )
        .unwrap();
        assert_eq!(c.data, vec![PathBuf::from("/etc/glosis/a.ttl"), PathBuf::from("/abs/b.ttl")]);
        assert_eq!(c.manifest, Some(PathBuf::from("/etc/glosis/m.manifest")));
        assert_eq!(c.endpoints["isric"], "http://x/sparql");
        assert_eq!(c.bind, DEFAULT_BIND);
        assert!(EndpointConfig::from_toml("colour = 1", Path::new(".")).is_err());
    }
}
