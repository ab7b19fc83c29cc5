pub mod config;
pub mod federation;
pub mod http;
pub mod ontology;
pub mod state;
pub mod template;

use std::sync::Arc;
use std::time::Duration;

use glosis_core::query::EvalOptions;

pub use config::EndpointConfig;
pub use federation::HttpServices;
pub use http::router;
pub use state::{AppState, MethodError, Snapshot};
pub use template::{load_templates, ParamError, ParamKind, ParamSpec, QueryTemplate, Resolver};

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Turtle { path: String, source: glosis_core::rdf::TurtleError },
    #[error(transparent)]
    Manifest(#[from] glosis_core::schema::ManifestError),
    #[error(transparent)]
    Schema(#[from] glosis_core::schema::SchemaError),
    #[error(transparent)]
    Template(#[from] template::TemplateError),
    #[error("data does not conform:\n{0}")]
    Invalid(String),
}

/// Timeout for one remote SERVICE call.
pub const SERVICE_TIMEOUT: Duration = Duration::from_secs(30);

/// Application state for `config`, federating through HTTP to its
/// registered endpoints.
pub fn app_state(config: &EndpointConfig) -> Result<AppState, ServiceError> {
    let snapshot = Snapshot::load(config)?;
    let services = HttpServices::new(config.endpoints.values(), SERVICE_TIMEOUT);
    let options = EvalOptions { lenient_services: config.lenient_services };
    Ok(AppState::new(snapshot, Arc::new(services), options))
}

/// Serves `state` on `listener` until ctrl-c.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
