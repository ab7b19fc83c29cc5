#![allow(dead_code)]

use std::path::PathBuf;

use glosis_core::rdf::{parse_turtle, Graph};
use glosis_core::schema::{load_catalog, load_manifest, OntologyCatalog};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")).join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

pub fn turtle(rel: &str) -> Graph {
    parse_turtle(&read(rel), None).unwrap()
}

pub fn mini_modules() -> Vec<(String, Graph)> {
    load_manifest(&fixture("mini-glosis/mini-glosis.manifest")).unwrap()
}

pub fn mini_catalog() -> OntologyCatalog {
    load_catalog(mini_modules()).unwrap()
}

pub const LH: &str = "http://w3id.org/glosis/model/layerhorizon/";
pub const SP: &str = "http://w3id.org/glosis/model/siteplot/";
pub const CL: &str = "http://w3id.org/glosis/model/codelists/";
pub const CM: &str = "http://w3id.org/glosis/model/common/";
pub const PROC: &str = "http://w3id.org/glosis/model/procedure/";

pub fn iri(ns: &str, local: &str) -> String {
    format!("{ns}{local}")
}
