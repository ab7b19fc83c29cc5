mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use glosis_core::query::{evaluate_graph, parse_query, EvalOptions, NoServices};
use glosis_core::rdf::vocab::xsd;
use glosis_core::rdf::{is_isomorphic, parse_turtle, Graph};
use glosis_service::http::rows_json;
use glosis_service::{router, Snapshot};

use common::*;

const AVG_PH_CACL2: &str = "
SELECT (AVG(?value) AS ?avg)
WHERE {
  ?obs a glosis_lh:PH ;
    sosa:hasResult ?res ;
    sosa:usedProcedure glosis_proc:pHProcedure-pHCaCl2 .
  ?res qudt:numericValue ?value .
  ?obs sosa:hasFeatureOfInterest/^iso28258:Profile.element/^iso28258:Site.typicalProfile ?site .
  ?site gsp:hasGeometry/gsp:asWKT ?wkt .
  FILTER (geof:sfIntersects(?wkt, \"POLYGON((-9 37, -8 37, -8 38, -9 38, -9 37))\"^^gsp:wktLiteral))
}";

#[tokio::test]
async fn sparql_post_returns_typed_results_json() {
    let app = app();
    let r = post_query(&app, AVG_PH_CACL2).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    assert_eq!(r.content_type, "application/sparql-results+json");
    let doc = r.json();
    assert_eq!(doc["head"]["vars"], serde_json::json!(["avg"]));
    let bindings = doc["results"]["bindings"].as_array().unwrap();
    assert_eq!(bindings.len(), 1);
    assert_eq!(bindings[0]["avg"]["type"], "literal");
    assert_eq!(bindings[0]["avg"]["value"], "4.3");
    assert_eq!(bindings[0]["avg"]["datatype"], xsd::FLOAT);
}

#[tokio::test]
async fn sparql_get_and_form_post_agree_with_raw_post() {
    let app = app();
    let raw = post_query(&app, AVG_PH_CACL2).await;
    let via_get = get(&app, &format!("/sparql?query={}", encode(AVG_PH_CACL2))).await;
    let form = send(
        &app,
        Request::post("/sparql")
            .header(header::CONTENT_TYPE, "application/x-www-form-urlencoded")
            .body(Body::from(format!("query={}", encode(AVG_PH_CACL2))))
            .unwrap(),
    )
    .await;
    assert_eq!(via_get.status, StatusCode::OK);
    assert_eq!(via_get.body, raw.body);
    assert_eq!(form.body, raw.body);
    assert_eq!(get(&app, "/sparql").await.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn bad_queries_get_machine_readable_400s() {
    let app = app();
    let r = post_query(&app, "SELECT ?s\nWHERE { ?s ?p }").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let e = r.json();
    assert_eq!(e["error"], "syntax");
    assert_eq!((e["line"].as_u64(), e["column"].as_u64()), (Some(2), Some(15)));

    let r = post_query(&app, "SELECT ?s WHERE { ?s ?p ?o OPTIONAL { ?s ?q ?r } }").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["feature"], "OPTIONAL");
}

const REMOTE: &str = "SELECT ?s WHERE { SERVICE <http://isric.invalid/sparql> { ?s a glosis_lh:NitrogenTotal } }";

#[tokio::test]
async fn unreachable_service_is_a_bad_gateway_unless_lenient() {
    let strict = app_without_services();
    let r = post_query(&strict, REMOTE).await;
    assert_eq!(r.status, StatusCode::BAD_GATEWAY);
    assert_eq!(r.json()["endpoint"], ISRIC);

    let lenient = router(state_with(snapshot(), Arc::new(NoServices), EvalOptions { lenient_services: true }));
    let r = post_query(&lenient, REMOTE).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["results"]["bindings"], serde_json::json!([]));

    let silent = post_query(&strict, &REMOTE.replace("SERVICE", "SERVICE SILENT")).await;
    assert_eq!(silent.status, StatusCode::OK);
}

#[tokio::test]
async fn method_listing_names_all_seven_methods() {
    let r = get(&app(), "/api").await;
    assert_eq!(r.status, StatusCode::OK);
    let methods: Vec<String> =
        r.json().as_array().unwrap().iter().map(|m| m["method"].as_str().unwrap().to_string()).collect();
    assert_eq!(methods, METHODS.map(String::from));
    let listing = r.json();
    let federated = listing.as_array().unwrap().iter().find(|m| m["method"] == METHODS[4]).unwrap();
    let endpoint = federated["params"].as_array().unwrap().iter().find(|p| p["name"] == "endpoint").unwrap();
    assert_eq!(endpoint["default"], "isric");
}

async fn call(method: &str, params: &[(&str, &str)]) -> serde_json::Value {
    let r = get(&app(), &api_uri(method, params)).await;
    assert_eq!(r.status, StatusCode::OK, "{method}: {}", r.body);
    assert_eq!(r.content_type, "application/json");
    r.json()
}

#[tokio::test]
async fn every_method_responds() {
    for m in METHODS {
        call(m, &valid_params(m)).await;
    }
}

#[tokio::test]
async fn ph_procedures_include_both_published_methods() {
    let rows = call("physioChemical_procedures", &[("property", "pH")]).await;
    let procedures: Vec<&str> =
        rows.as_array().unwrap().iter().map(|r| r["procedure"]["value"].as_str().unwrap()).collect();
    for p in ["pHProcedure-pHCaCl2", "pHProcedure-pHH2O"] {
        assert!(procedures.contains(&format!("http://w3id.org/glosis/model/procedure/{p}").as_str()), "{procedures:?}");
    }
    assert_eq!(rows[0]["procedure"]["type"], "uri");
    assert_eq!(rows[0]["label"]["datatype"], "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString");
    assert_eq!(rows[0]["label"]["xml:lang"], "en");
    let nitrogen = call("physioChemical_procedures", &[("property", "NitrogenTotal")]).await;
    assert_eq!(nitrogen.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn geo_average_finds_the_single_lucas_point() {
    let rows = call("avg_physioChemical_property_for_geo", &[("property", "pH"), ("geometry", LUCAS_BOX)]).await;
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["avg"]["value"], "4.3");
    assert_eq!(rows[0]["avg"]["datatype"], xsd::FLOAT);
}

#[tokio::test]
async fn nitrogen_far_from_any_site_is_empty() {
    let rows = call("avg_nitro_for_geo", &[("geometry", "POINT(0 0)")]).await;
    assert_eq!(rows, serde_json::json!([]));
    let rows = call("avg_nitro_for_geo", &[("geometry", PL41_BOX)]).await;
    assert!((number(&rows[0]["avg"]) - 2.65).abs() < 1e-6);
}

#[tokio::test]
async fn nuts_codes_resolve_to_region_geometries() {
    let rows = call("avg_physioChemical_property_for_NUTS", &[("property", "pH"), ("nuts", "PL")]).await;
    assert!((number(&rows[0]["avg"]) - (6.1 + 5.5 + 6.8 + 5.0) / 4.0).abs() < 1e-6);
    let rows = call(
        "avg_physioChemical_property_procedure_for_NUTS",
        &[("property", "pH"), ("procedure", "pHH2O"), ("nuts", "PL")],
    )
    .await;
    assert!((number(&rows[0]["avg"]) - (6.1 + 5.5 + 6.8) / 3.0).abs() < 1e-6);
    let rows = call("avg_physioChemical_property_for_NUTS", &[("property", "pH"), ("nuts", "PT")]).await;
    assert_eq!(rows[0]["avg"]["value"], "4.3");
}

#[tokio::test]
async fn land_use_count_follows_narrower_classes() {
    let params = [("landuse", "PRIMARY SECTOR"), ("property", "NitrogenTotal"), ("threshold", "2")];
    let rows = call("total_survey_points_lu_prop_value", &params).await;
    // pl1 (2.5, 2.8), pl3 (3.1) and lt1 (2.2); pl2 has 1.5.
    assert_eq!(rows[0]["total"]["value"], "3");
    let params = [("landuse", "Agriculture"), ("property", "NitrogenTotal"), ("threshold", "2.3")];
    let rows = call("total_survey_points_lu_prop_value", &params).await;
    assert_eq!(rows[0]["total"]["value"], "1");
}

#[tokio::test]
async fn federated_method_merges_the_registered_endpoint() {
    let rows =
        call("federated_soil_observations_for_property", &[("property", "NitrogenTotal"), ("threshold", "1")]).await;
    let values: Vec<f64> = rows.as_array().unwrap().iter().map(|r| number(&r["value"])).collect();
    let mut expected = vec![2.5, 2.8, 1.5, 3.1, 4.0, 2.2, 2.9, 1.2, 2.5];
    expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert_eq!(values.len(), expected.len(), "{values:?}");
    for (v, e) in values.iter().zip(&expected) {
        assert!((v - e).abs() < 1e-6, "{values:?}");
    }
    let r = get(
        &app(),
        &api_uri(
            "federated_soil_observations_for_property",
            &[("property", "NitrogenTotal"), ("threshold", "1"), ("endpoint", "foodie")],
        ),
    )
    .await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn parameter_errors_map_to_status_codes() {
    let app = app();
    type Case<'a> = (&'a str, &'a [(&'a str, &'a str)], StatusCode, &'a str);
    let cases: &[Case] = &[
        ("no_such_method", &[], StatusCode::NOT_FOUND, "unknown_method"),
        ("physioChemical_procedures", &[("property", "Colour")], StatusCode::UNPROCESSABLE_ENTITY, "invalid_parameter"),
        ("physioChemical_procedures", &[], StatusCode::BAD_REQUEST, "missing_parameter"),
        (
            "physioChemical_procedures",
            &[("property", "pH"), ("colour", "red")],
            StatusCode::UNPROCESSABLE_ENTITY,
            "unknown_parameter",
        ),
        ("avg_nitro_for_geo", &[("geometry", "POLYGON((1 2, 3")], StatusCode::BAD_REQUEST, "malformed_wkt"),
        (
            "avg_physioChemical_property_for_NUTS",
            &[("property", "pH"), ("nuts", "XX")],
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_parameter",
        ),
        (
            "total_survey_points_lu_prop_value",
            &[("landuse", "x"), ("property", "pH"), ("threshold", "1e400")],
            StatusCode::UNPROCESSABLE_ENTITY,
            "invalid_parameter",
        ),
    ];
    for (method, params, status, kind) in cases {
        let r = get(&app, &api_uri(method, params)).await;
        assert_eq!(r.status, *status, "{method} {params:?}: {}", r.body);
        assert_eq!(r.json()["error"], *kind);
    }
    let r = get(&app, "/api/physioChemical_procedures?property=pH&property=pH").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

/// Writes the parameter values into the template text by hand.
fn hand_instantiate(method: &str, params: &[(&str, &str)]) -> String {
    let text = std::fs::read_to_string(root().join("templates").join(format!("{method}.rq"))).unwrap();
    let mut text = text.replace("<urn:glosis:param:endpoint>", &format!("<{ISRIC}>"));
    for (name, value) in params {
        let term = match *name {
            "geometry" => format!("\"{value}\"^^gsp:wktLiteral"),
            "nuts" => match *value {
                "PL" => "\"POLYGON((14 49, 24 49, 24 55, 14 55, 14 49))\"^^gsp:wktLiteral".to_string(),
                other => panic!("no geometry for {other}"),
            },
            "property" => format!("glosis_cl:physioChemicalPropertyCode-{value}"),
            "procedure" => format!("glosis_proc:pHProcedure-{value}"),
            "threshold" => value.to_string(),
            "landuse" => format!("\"{value}\""),
            other => panic!("unexpected parameter {other}"),
        };
        text = text.replace(&format!("?_{name}"), &term);
    }
    text
}

#[tokio::test]
async fn rest_rows_equal_evaluating_the_hand_instantiated_query() {
    let snapshot = snapshot();
    let services = local_isric();
    let app = app();
    for m in METHODS {
        let params = valid_params(m);
        let query = parse_query(&hand_instantiate(m, &params)).unwrap();
        let table = evaluate_graph(&snapshot.graph, &query, &services, EvalOptions::default()).unwrap();
        let r = get(&app, &api_uri(m, &params)).await;
        assert_eq!(r.json(), rows_json(&table), "{m}");
    }
}

#[tokio::test]
async fn responses_are_deterministic() {
    let app = app();
    for m in METHODS {
        let uri = api_uri(m, &valid_params(m));
        assert_eq!(get(&app, &uri).await.body, get(&app, &uri).await.body, "{m}");
    }
}

#[tokio::test]
async fn ontology_modules_negotiate_turtle_and_html() {
    let app = app();
    let snapshot = snapshot();
    let module = "http://w3id.org/glosis/model/layerhorizon";

    let r = get_accept(&app, "/ontology/layerhorizon", "text/turtle").await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.content_type.starts_with("text/turtle"));
    let served: Graph = parse_turtle(&r.body, None).unwrap();
    assert!(is_isomorphic(&served, snapshot.catalog.module(module).unwrap()));

    let r = get_accept(&app, "/ontology/layerhorizon", "text/html").await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.content_type.starts_with("text/html"));
    let meta = snapshot.catalog.extract_metadata(module).unwrap();
    assert!(r.body.contains(&format!("<h1>{}</h1>", meta.title.unwrap())), "{}", r.body);
    assert!(r.body.contains(meta.version_info.as_deref().unwrap()));
    for creator in &meta.creators {
        assert!(r.body.contains(creator.as_str()));
    }

    for accept in ["application/x-unknown", "*/*", ""] {
        let r = get_accept(&app, "/ontology/layerhorizon", accept).await;
        assert_eq!(r.status, StatusCode::OK, "{accept}");
        assert!(r.content_type.starts_with("text/turtle"), "{accept}");
    }
}

#[tokio::test]
async fn ontology_terms_and_concepts_resolve_to_their_module() {
    let app = app();
    let r = get_accept(&app, "/ontology/layerhorizon/PH", "text/html").await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.body.contains("id=\"PH\""));

    let r = get_accept(&app, "/ontology/codelists/physioChemicalPropertyCode-pH", "text/html").await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.body.contains("id=\"physioChemicalPropertyCode-pH\""));
    assert!(r.body.contains("<dd>http://w3id.org/glosis/model/codelists</dd>"), "{}", r.body);

    let r = get_accept(&app, "/ontology/procedure/pHProcedure-pHH2O", "text/turtle").await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.body.contains("pHH2O"));

    let r = get_accept(&app, "/ontology/iso28258/2013", "text/html").await;
    assert_eq!(r.status, StatusCode::OK);

    for path in ["/ontology/nothing", "/ontology/layerhorizon/NoSuchTerm"] {
        assert_eq!(get(&app, path).await.status, StatusCode::NOT_FOUND, "{path}");
    }
}

#[tokio::test]
async fn reload_swaps_the_snapshot_without_touching_held_ones() {
    let state = state_with(snapshot(), Arc::new(local_isric()), EvalOptions::default());
    let app = router(state.clone());
    let held = state.snapshot();
    let uri = api_uri("avg_physioChemical_property_for_geo", &valid_params("avg_physioChemical_property_for_geo"));
    assert_eq!(get(&app, &uri).await.json().as_array().unwrap().len(), 1);

    let empty = Snapshot::new(Graph::new(), held.catalog.clone(), held.templates.clone(), &config(&[])).unwrap();
    state.reload(empty);
    assert_eq!(get(&app, &uri).await.json(), serde_json::json!([]));
    assert!(!held.data.is_empty());
    let params: BTreeMap<String, String> = valid_params("avg_physioChemical_property_for_geo")
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let rows =
        held.run_method("avg_physioChemical_property_for_geo", &params, &NoServices, EvalOptions::default()).unwrap();
    assert_eq!(rows.len(), 1);
}

#[tokio::test]
async fn strict_loading_rejects_nonconforming_data() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ttl");
    let lucas = std::fs::read_to_string(fixture("data/lucas_26761786.ttl")).unwrap();
    std::fs::write(&bad, lucas.replace("\"4.30\"^^xsd:float", "\"abc\"^^xsd:float")).unwrap();
    let mut config = config(&[]);
    config.data = vec![bad];
    config.strict = true;
    assert!(matches!(Snapshot::load(&config), Err(glosis_service::ServiceError::Invalid(_))));
    config.strict = false;
    assert!(Snapshot::load(&config).is_ok());
}
