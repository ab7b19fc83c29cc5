use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::{Arc, RwLock};

use glosis_core::query::{evaluate_graph, EvalOptions, ServiceClient, SolutionTable};
use glosis_core::rdf::{parse_turtle, Graph};
use glosis_core::schema::{load_catalog, load_manifest, OntologyCatalog};
use glosis_core::validate::{validate_dataset, ValidationConfig};

use crate::config::EndpointConfig;
use crate::template::{load_templates, ParamError, QueryTemplate, Resolver};
use crate::ServiceError;

/// Everything a request reads. Immutable; replaced as a whole on reload.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub data: Graph,
    pub catalog: OntologyCatalog,
    /// Data and ontology together; queries run against this graph.
    pub graph: Graph,
    pub templates: BTreeMap<String, QueryTemplate>,
    pub registry: BTreeMap<String, String>,
    pub property_scheme: String,
    pub ontology_base: String,
}

impl Snapshot {
    /// Checks that every template parameter resolves against the catalog
    /// and registry.
    pub fn new(
        data: Graph,
        catalog: OntologyCatalog,
        templates: BTreeMap<String, QueryTemplate>,
        config: &EndpointConfig,
    ) -> Result<Snapshot, ServiceError> {
        let mut graph = data.clone();
        graph.merge(catalog.graph());
        let snapshot = Snapshot {
            data,
            catalog,
            graph,
            templates,
            registry: config.endpoints.clone(),
            property_scheme: config.property_scheme.clone(),
            ontology_base: config.ontology_base.clone(),
        };
        for t in snapshot.templates.values() {
            t.check_enumerations(&snapshot.resolver())?;
        }
        Ok(snapshot)
    }

    /// Reads the files named by `config`.
    pub fn load(config: &EndpointConfig) -> Result<Snapshot, ServiceError> {
        let mut data = Graph::new();
        for path in &config.data {
            data.merge(&read_turtle(path)?);
        }
        let modules = match &config.manifest {
            Some(m) => load_manifest(m)?,
            None => Vec::new(),
        };
        let catalog = load_catalog(modules)?;
        if config.strict {
            let report = validate_dataset(&data, &catalog, &ValidationConfig { strict: true, ..Default::default() });
            if !report.conforms() {
                return Err(ServiceError::Invalid(report.to_text()));
            }
        }
        let templates = match &config.templates {
            Some(dir) => load_templates(dir)?,
            None => BTreeMap::new(),
        };
        Snapshot::new(data, catalog, templates, config)
    }

    pub fn resolver(&self) -> Resolver<'_> {
        Resolver {
            catalog: &self.catalog,
            data: &self.graph,
            registry: &self.registry,
            property_scheme: &self.property_scheme,
        }
    }

    /// Binds, instantiates and runs a REST method.
    pub fn run_method(
        &self,
        method: &str,
        params: &BTreeMap<String, String>,
        services: &dyn ServiceClient,
        options: EvalOptions,
    ) -> Result<SolutionTable, MethodError> {
        let template = self.templates.get(method).ok_or_else(|| MethodError::UnknownMethod(method.into()))?;
        let values = template.bind(params, &self.resolver())?;
        let query = template.instantiate(&values);
        Ok(evaluate_graph(&self.graph, &query, services, options)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MethodError {
    #[error("no method {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Query(#[from] glosis_core::query::QueryError),
}

pub fn read_turtle(path: &Path) -> Result<Graph, ServiceError> {
    let text =
        fs::read_to_string(path).map_err(|source| ServiceError::Io { path: path.display().to_string(), source })?;
    parse_turtle(&text, None).map_err(|source| ServiceError::Turtle { path: path.display().to_string(), source })
}

/// Shared by all request handlers.
pub struct AppState {
    snapshot: RwLock<Arc<Snapshot>>,
    pub services: Arc<dyn ServiceClient>,
    pub options: EvalOptions,
}

impl AppState {
    pub fn new(snapshot: Snapshot, services: Arc<dyn ServiceClient>, options: EvalOptions) -> Self {
        AppState { snapshot: RwLock::new(Arc::new(snapshot)), services, options }
    }

    /// The current snapshot. Requests keep the one they started with.
    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.snapshot.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn reload(&self, snapshot: Snapshot) {
        *self.snapshot.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(snapshot);
    }
}
