use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde_json::{json, Map, Value};

use glosis_core::query::{evaluate_graph, parse_query, to_sparql_json, QueryError, SolutionTable};
use glosis_core::rdf::Term;

use crate::ontology;
use crate::state::{AppState, MethodError};
use crate::template::ParamError;

pub const SPARQL_RESULTS_JSON: &str = "application/sparql-results+json";

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sparql", get(sparql_get).post(sparql_post))
        .route("/api", get(list_methods))
        .route("/api/{method}", get(call_method))
        .route("/ontology/{*path}", get(ontology_resource))
        .with_state(state)
}

fn error(status: StatusCode, body: Value) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body.to_string()).into_response()
}

fn query_error(e: QueryError) -> Response {
    match &e {
        QueryError::Syntax { message, line, column } => error(
            StatusCode::BAD_REQUEST,
            json!({ "error": "syntax", "message": message, "line": line, "column": column }),
        ),
        QueryError::Unsupported { feature, line, column } => error(
            StatusCode::BAD_REQUEST,
            json!({ "error": "unsupported", "feature": feature, "message": e.to_string(), "line": line, "column": column }),
        ),
        QueryError::Service { endpoint, message } => {
            error(StatusCode::BAD_GATEWAY, json!({ "error": "service", "endpoint": endpoint, "message": message }))
        }
        QueryError::Results(message) => {
            error(StatusCode::BAD_GATEWAY, json!({ "error": "service", "message": message }))
        }
    }
}

fn internal(message: impl std::fmt::Display) -> Response {
    error(StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": "internal", "message": message.to_string() }))
}

async fn sparql_get(State(state): State<Arc<AppState>>, Query(params): Query<Vec<(String, String)>>) -> Response {
    match params.into_iter().find(|(k, _)| k == "query") {
        Some((_, q)) => run_sparql(state, q).await,
        None => error(StatusCode::BAD_REQUEST, json!({ "error": "request", "message": "missing query parameter" })),
    }
}

async fn sparql_post(State(state): State<Arc<AppState>>, headers: HeaderMap, body: Bytes) -> Response {
    let content_type = headers.get(header::CONTENT_TYPE).and_then(|v| v.to_str().ok()).unwrap_or("");
    let query = if content_type.starts_with("application/x-www-form-urlencoded") {
        serde_urlencoded::from_bytes::<Vec<(String, String)>>(&body)
            .ok()
            .and_then(|form| form.into_iter().find(|(k, _)| k == "query").map(|(_, q)| q))
    } else {
        String::from_utf8(body.to_vec()).ok()
    };
    match query {
        Some(q) => run_sparql(state, q).await,
        None => error(StatusCode::BAD_REQUEST, json!({ "error": "request", "message": "no UTF-8 query in the body" })),
    }
}

async fn run_sparql(state: Arc<AppState>, text: String) -> Response {
    let query = match parse_query(&text) {
        Ok(q) => q,
        Err(e) => return query_error(e),
    };
    let snapshot = state.snapshot();
    let result =
        tokio::task::spawn_blocking(move || evaluate_graph(&snapshot.graph, &query, &*state.services, state.options))
            .await;
    match result {
        Ok(Ok(table)) => {
            ([(header::CONTENT_TYPE, SPARQL_RESULTS_JSON)], to_sparql_json(&table).to_string()).into_response()
        }
        Ok(Err(e)) => query_error(e),
        Err(e) => internal(e),
    }
}

async fn list_methods(State(state): State<Arc<AppState>>) -> Response {
    let snapshot = state.snapshot();
    let methods: Vec<Value> = snapshot
        .templates
        .values()
        .map(|t| {
            json!({
                "method": t.method,
                "path": format!("/api/{}", t.method),
                "summary": t.summary,
                "params": t.params.iter().map(|p| json!({
                    "name": p.name,
                    "kind": p.kind.name(),
                    "default": p.default,
                })).collect::<Vec<_>>(),
                "columns": t.columns,
            })
        })
        .collect();
    axum::Json(methods).into_response()
}

/// A row cell: `value` plus `datatype` for literals, `type` always.
fn cell(t: &Term) -> Value {
    let mut m = Map::new();
    match t {
        Term::Iri(i) => {
            m.insert("type".into(), "uri".into());
            m.insert("value".into(), i.as_str().into());
        }
        Term::BlankNode(b) => {
            m.insert("type".into(), "bnode".into());
            m.insert("value".into(), b.as_str().into());
        }
        Term::Literal(l) => {
            m.insert("type".into(), "literal".into());
            m.insert("value".into(), l.lexical().into());
            m.insert("datatype".into(), l.datatype().into());
            if let Some(lang) = l.language() {
                m.insert("xml:lang".into(), lang.into());
            }
        }
    }
    Value::Object(m)
}

/// Result rows as objects keyed by column; unbound columns are omitted.
pub fn rows_json(table: &SolutionTable) -> Value {
    Value::Array(
        table
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    table.vars.iter().zip(row).filter_map(|(v, t)| t.as_ref().map(|t| (v.clone(), cell(t)))).collect(),
                )
            })
            .collect(),
    )
}

async fn call_method(
    State(state): State<Arc<AppState>>,
    Path(method): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> Response {
    let mut params = BTreeMap::new();
    for (k, v) in pairs {
        if params.insert(k.clone(), v).is_some() {
            return error(
                StatusCode::BAD_REQUEST,
                json!({ "error": "request", "message": format!("parameter {k:?} given twice") }),
            );
        }
    }
    let snapshot = state.snapshot();
    let result =
        tokio::task::spawn_blocking(move || snapshot.run_method(&method, &params, &*state.services, state.options))
            .await;
    match result {
        Ok(Ok(table)) => axum::Json(rows_json(&table)).into_response(),
        Ok(Err(MethodError::UnknownMethod(m))) => {
            error(StatusCode::NOT_FOUND, json!({ "error": "unknown_method", "method": m }))
        }
        Ok(Err(MethodError::Param(e))) => {
            let (status, kind, name) = match &e {
                ParamError::Missing(n) => (StatusCode::BAD_REQUEST, "missing_parameter", n),
                ParamError::MalformedWkt { name, .. } => (StatusCode::BAD_REQUEST, "malformed_wkt", name),
                ParamError::Unknown(n) => (StatusCode::UNPROCESSABLE_ENTITY, "unknown_parameter", n),
                ParamError::Invalid { name, .. } => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_parameter", name),
            };
            error(status, json!({ "error": kind, "parameter": name, "message": e.to_string() }))
        }
        Ok(Err(MethodError::Query(e))) => query_error(e),
        Err(e) => internal(e),
    }
}

async fn ontology_resource(
    State(state): State<Arc<AppState>>,
    Path(path): Path<String>,
    headers: HeaderMap,
) -> Response {
    let snapshot = state.snapshot();
    let iri = format!("{}{}", snapshot.ontology_base, path);
    let Some(resource) = ontology::resolve(&snapshot.catalog, &iri) else {
        return error(StatusCode::NOT_FOUND, json!({ "error": "not_found", "iri": iri }));
    };
    let accept = headers.get(header::ACCEPT).and_then(|v| v.to_str().ok());
    let body = if ontology::prefers_html(accept) {
        ontology::module_html(&snapshot.catalog, &resource).map(|b| ("text/html; charset=utf-8", b))
    } else {
        ontology::module_turtle(&snapshot.catalog, &resource.module).map(|b| ("text/turtle; charset=utf-8", b))
    };
    match body {
        Some((media, b)) => ([(header::CONTENT_TYPE, media), (header::VARY, "Accept")], b).into_response(),
        None => error(StatusCode::NOT_FOUND, json!({ "error": "not_found", "iri": iri })),
    }
}
