#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use tower::ServiceExt;

use glosis_core::query::{EvalOptions, LocalEndpoints, NoServices, ServiceClient};
use glosis_core::rdf::{parse_turtle, Dataset, Graph};
use glosis_service::{router, AppState, EndpointConfig, Snapshot};

pub const ISRIC: &str = "http://isric.invalid/sparql";

pub fn root() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

pub fn fixture(rel: &str) -> PathBuf {
    root().join("fixtures").join(rel)
}

pub fn turtle(rel: &str) -> Graph {
    parse_turtle(&std::fs::read_to_string(fixture(rel)).unwrap(), None).unwrap()
}

/// LUCAS, the survey points and the NUTS regions with the mini catalog and
/// the shipped templates; `isric` is registered as [`ISRIC`].
pub fn config(data: &[&str]) -> EndpointConfig {
    EndpointConfig {
        data: data.iter().map(|d| fixture(d)).collect(),
        manifest: Some(fixture("mini-glosis/mini-glosis.manifest")),
        templates: Some(root().join("templates")),
        endpoints: BTreeMap::from([("isric".to_string(), ISRIC.to_string())]),
        ..EndpointConfig::default()
    }
}

pub const SURVEY: &[&str] = &["data/lucas_26761786.ttl", "data/survey_points.ttl", "data/nuts_regions.ttl"];

pub fn snapshot() -> Snapshot {
    Snapshot::load(&config(SURVEY)).unwrap()
}

/// The ISRIC federation fixture answers for [`ISRIC`].
pub fn local_isric() -> LocalEndpoints {
    LocalEndpoints::new().with(ISRIC, Dataset::from_default(turtle("federation/isric.ttl")))
}

pub fn state_with(snapshot: Snapshot, services: Arc<dyn ServiceClient>, options: EvalOptions) -> Arc<AppState> {
    Arc::new(AppState::new(snapshot, services, options))
}

pub fn app() -> Router {
    router(state_with(snapshot(), Arc::new(local_isric()), EvalOptions::default()))
}

pub fn app_without_services() -> Router {
    router(state_with(snapshot(), Arc::new(NoServices), EvalOptions::default()))
}

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub body: String,
}

impl Reply {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_str(&self.body).unwrap_or_else(|e| panic!("{e}: {}", self.body))
    }
}

pub async fn send(app: &Router, request: Request<Body>) -> Reply {
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let content_type =
        response.headers().get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    Reply { status, content_type, body: String::from_utf8(bytes.to_vec()).unwrap() }
}

pub fn encode(s: &str) -> String {
    serde_urlencoded::to_string([("", s)]).unwrap()[1..].to_string()
}

pub fn api_uri(method: &str, params: &[(&str, &str)]) -> String {
    let q: Vec<String> = params.iter().map(|(k, v)| format!("{}={}", encode(k), encode(v))).collect();
    format!("/api/{method}?{}", q.join("&"))
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

pub async fn get_accept(app: &Router, uri: &str, accept: &str) -> Reply {
    send(app, Request::get(uri).header(header::ACCEPT, accept).body(Body::empty()).unwrap()).await
}

pub async fn post_query(app: &Router, query: &str) -> Reply {
    let request = Request::post("/sparql")
        .header(header::CONTENT_TYPE, "application/sparql-query")
        .body(Body::from(query.to_string()))
        .unwrap();
    send(app, request).await
}

/// The numeric value of a REST cell or SPARQL JSON binding.
pub fn number(cell: &serde_json::Value) -> f64 {
    cell["value"].as_str().unwrap().parse().unwrap()
}

/// Valid arguments for every shipped method.
pub fn valid_params(method: &str) -> Vec<(&'static str, &'static str)> {
    match method {
        "avg_nitro_for_geo" => vec![("geometry", PL41_BOX)],
        "avg_physioChemical_property_for_geo" => vec![("property", "pH"), ("geometry", LUCAS_BOX)],
        "avg_physioChemical_property_for_NUTS" => vec![("property", "pH"), ("nuts", "PL")],
        "avg_physioChemical_property_procedure_for_NUTS" => {
            vec![("property", "pH"), ("procedure", "pHH2O"), ("nuts", "PL")]
        }
        "federated_soil_observations_for_property" => vec![("property", "NitrogenTotal"), ("threshold", "1")],
        "physioChemical_procedures" => vec![("property", "pH")],
        "total_survey_points_lu_prop_value" => {
            vec![("landuse", "PRIMARY SECTOR"), ("property", "NitrogenTotal"), ("threshold", "2")]
        }
        other => panic!("no arguments for {other}"),
    }
}

pub const METHODS: [&str; 7] = [
    "avg_nitro_for_geo",
    "avg_physioChemical_property_for_NUTS",
    "avg_physioChemical_property_for_geo",
    "avg_physioChemical_property_procedure_for_NUTS",
    "federated_soil_observations_for_property",
    "physioChemical_procedures",
    "total_survey_points_lu_prop_value",
];

pub const LUCAS_BOX: &str = "POLYGON((-9 37, -8 37, -8 38, -9 38, -9 37))";
pub const PL41_BOX: &str = "POLYGON((15.8 51.1, 19.2 51.1, 19.2 53.7, 15.8 53.7, 15.8 51.1))";
