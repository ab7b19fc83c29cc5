mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use axum::http::StatusCode;
use axum::Router;
use glosis_core::query::{evaluate, from_sparql_json, parse_query, EvalOptions, NoServices, SolutionTable};
use glosis_core::rdf::{Dataset, Term};
use glosis_service::{router, EndpointConfig, HttpServices, Snapshot};

use common::*;

/// Starts an instance on an ephemeral port and returns its `/sparql` URL.
async fn start(snapshot: Snapshot) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let url = format!("http://{}/sparql", listener.local_addr().unwrap());
    let app = router(state_with(snapshot, Arc::new(NoServices), EvalOptions::default()));
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    url
}

fn remote_config(data: &str) -> EndpointConfig {
    EndpointConfig { templates: None, endpoints: BTreeMap::new(), ..config(&[data]) }
}

/// The FOODIE instance, federating to `isric_url` under the name "isric".
fn foodie(isric_url: &str, options: EvalOptions) -> Router {
    let config = EndpointConfig {
        endpoints: BTreeMap::from([("isric".to_string(), isric_url.to_string())]),
        ..config(&["federation/foodie.ttl"])
    };
    let snapshot = Snapshot::load(&config).unwrap();
    let services = HttpServices::new(config.endpoints.values(), Duration::from_secs(5));
    router(state_with(snapshot, Arc::new(services), options))
}

fn federated(url: &str) -> String {
    format!(
        "SELECT ?obs ?lay ?value
WHERE {{{{
  SELECT ?obs ?lay ?value
  WHERE {{
    ?obs a glosis_lh:NitrogenTotal ;
       sosa:hasResult ?res ;
       sosa:hasFeatureOfInterest ?lay .
    ?res qudt:numericValue ?value .
    FILTER (?value > 2)
  }}}}
  UNION {{
  SELECT ?obs ?lay ?value
  WHERE {{
   SERVICE <{url}> {{
     ?obs a glosis_lh:NitrogenTotal ;
        sosa:hasResult ?res ;
        sosa:hasFeatureOfInterest ?lay .
     ?res qudt:numericValue ?value .
     FILTER (?value > 2)
  }}}}}}
}} ORDER BY DESC (?value)"
    )
}

const LOCAL_N: &str = "SELECT ?obs ?lay ?value WHERE {
    ?obs a glosis_lh:NitrogenTotal ; sosa:hasResult ?res ; sosa:hasFeatureOfInterest ?lay .
    ?res qudt:numericValue ?value . FILTER (?value > 2) }";

fn local_run(fixture: &str) -> SolutionTable {
    evaluate(&Dataset::from_default(turtle(fixture)), &parse_query(LOCAL_N).unwrap(), &NoServices).unwrap()
}

fn value(t: &Term) -> f64 {
    t.as_literal().unwrap().lexical().parse().unwrap()
}

#[tokio::test(flavor = "multi_thread")]
async fn federated_union_over_two_instances_is_the_multiset_union() {
    let isric_url = start(Snapshot::load(&remote_config("federation/isric.ttl")).unwrap()).await;
    let app = foodie(&isric_url, EvalOptions::default());

    let r = post_query(&app, &federated(&isric_url)).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let table = from_sparql_json(&r.json()).unwrap();

    let mut expected = local_run("federation/foodie.ttl").rows;
    expected.extend(local_run("federation/isric.ttl").rows);
    expected.sort();
    assert_eq!(table.sorted_rows(), expected);
    assert_eq!(table.len(), 5);
    let values: Vec<f64> = table.rows.iter().map(|row| value(row[2].as_ref().unwrap())).collect();
    assert!(values.windows(2).all(|w| w[0] >= w[1]), "{values:?}");
}

#[tokio::test(flavor = "multi_thread")]
async fn federated_rest_method_uses_the_registry() {
    let isric_url = start(Snapshot::load(&remote_config("federation/isric.ttl")).unwrap()).await;
    let app = foodie(&isric_url, EvalOptions::default());
    let r = get(
        &app,
        &api_uri("federated_soil_observations_for_property", &[("property", "NitrogenTotal"), ("threshold", "2")]),
    )
    .await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.body);
    let values: Vec<f64> = r.json().as_array().unwrap().iter().map(|row| number(&row["value"])).collect();
    let mut expected = vec![2.5, 2.8, 3.1, 2.9, 2.5];
    expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
    assert_eq!(values.len(), expected.len());
    assert!(values.iter().zip(&expected).all(|(v, e)| (v - e).abs() < 1e-6), "{values:?}");
}

#[tokio::test(flavor = "multi_thread")]
async fn unregistered_and_unreachable_endpoints_fail_with_502() {
    // A listener that is dropped at once leaves a port nobody answers on.
    let dead = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        format!("http://{}/sparql", l.local_addr().unwrap())
    };
    let app = foodie(&dead, EvalOptions::default());
    let r = post_query(&app, &federated(&dead)).await;
    assert_eq!(r.status, StatusCode::BAD_GATEWAY, "{}", r.body);

    let r = post_query(&app, &federated("http://127.0.0.1:1/not-registered")).await;
    assert_eq!(r.status, StatusCode::BAD_GATEWAY);
    assert!(r.json()["message"].as_str().unwrap().contains("not a registered endpoint"));

    let lenient = foodie(&dead, EvalOptions { lenient_services: true });
    let r = post_query(&lenient, &federated(&dead)).await;
    assert_eq!(r.status, StatusCode::OK);
    let table = from_sparql_json(&r.json()).unwrap();
    assert_eq!(table.sorted_rows(), local_run("federation/foodie.ttl").sorted_rows());
}
