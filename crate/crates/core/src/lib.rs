//! Core of the GloSIS linked-data toolkit: RDF storage and Turtle I/O,
//! WKT geometry, ontology compilation, closed-world validation, survey ETL
//! and a SPARQL-subset query engine.

pub mod geo;
pub mod query;
pub mod rdf;
pub mod schema;
pub mod transform;
pub mod validate;
